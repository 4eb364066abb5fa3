#include <doctest.h>

#include "compmod/compose.hpp"

using namespace compmod;

namespace {

ComposableRelation rel(const char* text) {
    auto c = classify_relation(parse_one(text));
    REQUIRE(c);
    return *c;
}

std::string composed(std::initializer_list<const char*> texts) {
    std::vector<ComposableRelation> rs;
    for (const char* t : texts) rs.push_back(rel(t));
    auto res = compose_relations(rs);
    if (auto* t = std::get_if<Term>(&res)) return t->str();
    return "non-composable: " + std::get<NonComposable>(res).reason;
}

} // namespace

TEST_CASE("classification of composable functors") {
    CHECK(rel("(== x (C-add y))").functor == Functor::Add);
    CHECK(rel("(d/dt n (C-sub d))").functor == Functor::Sub);
    CHECK(rel("(== x (C-div y))").functor == Functor::Div);
    auto i = rel("(== v (C-if (> t 0) a :priority 3))");
    CHECK(i.functor == Functor::If);
    CHECK(i.priority == 3);
    CHECK(i.antecedent.str() == "(> t 0)");
    CHECK(rel("(== v (+ a b))").functor == Functor::Plain);
    CHECK_FALSE(classify_relation(parse_one("(flow f a sink)")));
    CHECK_THROWS_AS(classify_relation(parse_one("(== x (C-add y z))")), Error);
    CHECK_THROWS_AS(classify_relation(parse_one("(== x (C-if a b :priority 1/2))")), Error);
}

TEST_CASE("additive composition") {
    CHECK(composed({"(== x (C-add y))", "(== x (C-sub z))"}) == "(== x (- y z))");
    CHECK(composed({"(== x (C-add y))"}) == "(== x y)");
    CHECK(composed({"(d/dt n (C-add b))", "(d/dt n (C-sub d))", "(d/dt n (C-sub p))"}) == "(d/dt n (- b (+ d p)))");
    CHECK(composed({"(== x (C-sub z))"}) == "(== x (- z))");
}

TEST_CASE("multiplicative composition") {
    CHECK(composed({"(== x (C-mul a))", "(== x (C-mul b))", "(== x (C-div c))"}) == "(== x (/ (* a b) c))");
    CHECK(composed({"(== x (C-div c))"}) == "(== x (/ 1 c))");
    CHECK(composed({"(== x (C-mul a))"}) == "(== x a)");
}

TEST_CASE("selection composition orders by descending priority") {
    CHECK(composed({"(== v (C-if a1 f1 :priority 2))", "(== v (C-if a2 f2 :priority 1))", "(== v (C-else f3))"}) ==
          "(== v (if a1 f1 (if a2 f2 f3)))");
    CHECK(composed({"(== v (C-if a2 f2 :priority 1))", "(== v (C-else f3))", "(== v (C-if a1 f1 :priority 2))"}) ==
          "(== v (if a1 f1 (if a2 f2 f3)))");
    CHECK(composed({"(== v (C-else f3))"}) == "(== v f3)");
}

TEST_CASE("non-composable sets") {
    CHECK(composed({"(== x (C-add y))", "(== x (C-mul z))"}).rfind("non-composable", 0) == 0);
    CHECK(composed({"(== v (C-if a f :priority 1))", "(== v (C-if b g :priority 1))", "(== v (C-else h))"})
              .rfind("non-composable", 0) == 0);
    CHECK(composed({"(== v (C-else g))", "(== v (C-else h))"}).rfind("non-composable", 0) == 0);
    CHECK(composed({"(== v (C-if a f :priority 1))"}).rfind("non-composable", 0) == 0);
    CHECK(composed({"(== x (+ a b))", "(== x (C-add c))"}).rfind("non-composable", 0) == 0);
    CHECK(composed({"(== x (+ a b))"}) == "(== x (+ a b))");
    CHECK_THROWS_AS(compose_relations({rel("(== x (C-add y))"), rel("(== z (C-add y))")}), Error);
}

TEST_CASE("infix rendering") {
    CHECK(render_infix(parse_one("(d/dt n (- b (+ d p)))")) == "d/dt n = b - (d + p)");
    CHECK(render_infix(parse_one("(== f (* r n))")) == "f = r*n");
    CHECK(render_infix(parse_one("(== p (/ (* s n m) (+ 1 (* s h n))))")) == "p = s*n*m / (1 + s*h*n)");
    CHECK(render_infix(parse_one("(== v (if a f g))")) == "v = if a then f else g");
    CHECK(render_infix(parse_one("(== x (- (- a b) c))")) == "x = a - b - c");
}
