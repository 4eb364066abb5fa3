#include "compmod/terms.hpp"

#include <cctype>
#include <numeric>
#include <regex>
#include <sstream>

namespace compmod {

namespace {

bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
}

bool looks_numeric(std::string_view s) {
    static const std::regex re(R"([+-]?[0-9]+(/[0-9]+)?)");
    return std::regex_match(s.begin(), s.end(), re);
}

bool valid_bare(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (is_delim(c)) return false;
    return true;
}

} // namespace

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error("MalformedTerm", "zero denominator");
    if (d < 0) { n = -n; d = -d; }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    return Rational{n, d};
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Term Term::symbol(std::string name) {
    if (!valid_bare(name) || name[0] == '?' || name == "*" || looks_numeric(name))
        throw Error("MalformedTerm", "invalid symbol '" + name + "'");
    Term t;
    t.kind_ = TermKind::Symbol;
    t.text_ = std::move(name);
    return t;
}

Term Term::number(Rational r) {
    Term t;
    t.kind_ = TermKind::Number;
    t.num_ = Rational::make(r.num, r.den);
    return t;
}

Term Term::variable(std::string name) {
    if (!valid_bare(name))
        throw Error("MalformedTerm", "invalid variable name '" + name + "'");
    Term t;
    t.kind_ = TermKind::Variable;
    t.text_ = std::move(name);
    return t;
}

Term Term::wildcard() {
    Term t;
    t.kind_ = TermKind::Wildcard;
    return t;
}

Term Term::list(std::vector<Term> items) {
    Term t;
    t.kind_ = TermKind::Compound;
    t.items_ = std::move(items);
    return t;
}

bool Term::has_variables() const {
    if (kind_ == TermKind::Variable) return true;
    for (const auto& i : items_)
        if (i.has_variables()) return true;
    return false;
}

bool Term::has_wildcards() const {
    if (kind_ == TermKind::Wildcard) return true;
    for (const auto& i : items_)
        if (i.has_wildcards()) return true;
    return false;
}

void Term::collect_variables(std::vector<std::string>& out) const {
    if (kind_ == TermKind::Variable) {
        for (const auto& v : out)
            if (v == text_) return;
        out.push_back(text_);
        return;
    }
    for (const auto& i : items_) i.collect_variables(out);
}

std::string Term::str() const { return print_canonical(*this); }

bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
    case TermKind::Symbol:
    case TermKind::Variable: return a.text_ == b.text_;
    case TermKind::Number: return a.num_ == b.num_;
    case TermKind::Wildcard: return true;
    case TermKind::Compound: return a.items_ == b.items_;
    }
    return false;
}

bool operator<(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    switch (a.kind_) {
    case TermKind::Symbol:
    case TermKind::Variable: return a.text_ < b.text_;
    case TermKind::Number: return a.num_ < b.num_;
    case TermKind::Wildcard: return false;
    case TermKind::Compound:
        return std::lexicographical_compare(a.items_.begin(), a.items_.end(), b.items_.begin(),
                                            b.items_.end());
    }
    return false;
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view s) : src_(s) {}

    std::vector<Positioned> read_all() {
        std::vector<Positioned> out;
        for (;;) {
            skip();
            if (pos_ >= src_.size()) break;
            if (src_[pos_] == ')') fail("UnbalancedParenthesis", "unexpected ')'");
            int line = line_;
            out.push_back({read(), line});
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;

    [[noreturn]] void fail(const char* kind, const std::string& msg) const {
        throw ParseError(kind, msg, pos_, line_);
    }

    void skip() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') { ++line_; ++pos_; }
            else if (std::isspace(static_cast<unsigned char>(c))) ++pos_;
            else if (c == ';') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else break;
        }
    }

    Term read() {
        if (src_[pos_] == '(') {
            std::size_t open = pos_;
            int open_line = line_;
            ++pos_;
            std::vector<Term> items;
            for (;;) {
                skip();
                if (pos_ >= src_.size())
                    throw ParseError("UnbalancedParenthesis", "unclosed '('", open, open_line);
                if (src_[pos_] == ')') { ++pos_; break; }
                items.push_back(read());
            }
            return Term::list(std::move(items));
        }
        std::size_t start = pos_;
        while (pos_ < src_.size() && !is_delim(src_[pos_])) ++pos_;
        std::string tok(src_.substr(start, pos_ - start));
        if (tok == "*") return Term::wildcard();
        if (tok[0] == '?') {
            if (tok.size() == 1) {
                pos_ = start;
                fail("EmptyVariableName", "'?' without a name");
            }
            return Term::variable(tok.substr(1));
        }
        if (looks_numeric(tok)) {
            auto slash = tok.find('/');
            try {
                if (slash == std::string::npos) return Term::number(std::stoll(tok));
                return Term::number(
                    Rational::make(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1))));
            } catch (const std::out_of_range&) {
                pos_ = start;
                fail("MalformedTerm", "number out of range '" + tok + "'");
            } catch (const Error& e) {
                pos_ = start;
                fail("MalformedTerm", e.what());
            }
        }
        return Term::symbol(tok);
    }
};

void print_into(const Term& t, std::string& out) {
    switch (t.kind()) {
    case TermKind::Symbol: out += t.name(); break;
    case TermKind::Number: out += t.value().str(); break;
    case TermKind::Variable: out += '?'; out += t.name(); break;
    case TermKind::Wildcard: out += '*'; break;
    case TermKind::Compound:
        out += '(';
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) out += ' ';
            print_into(t[i], out);
        }
        out += ')';
        break;
    }
}

bool match_into(const Term& p, const Term& i, Substitution& s) {
    switch (p.kind()) {
    case TermKind::Wildcard: return true;
    case TermKind::Variable: {
        auto it = s.find(p.name());
        if (it != s.end()) return it->second == i;
        s.emplace(p.name(), i);
        return true;
    }
    case TermKind::Compound:
        if (!i.is_compound() || i.size() != p.size()) return false;
        for (std::size_t k = 0; k < p.size(); ++k)
            if (!match_into(p[k], i[k], s)) return false;
        return true;
    default: return p == i;
    }
}

} // namespace

std::vector<Positioned> parse_with_positions(std::string_view text) {
    return Reader(text).read_all();
}

std::vector<Term> parse(std::string_view text) {
    std::vector<Term> out;
    for (auto& p : parse_with_positions(text)) out.push_back(std::move(p.term));
    return out;
}

Term parse_one(std::string_view text) {
    auto ts = parse(text);
    if (ts.size() != 1)
        throw Error("MalformedTerm", "expected exactly one term in '" + std::string(text) + "'");
    return ts.front();
}

std::string print_canonical(const Term& t) {
    std::string out;
    print_into(t, out);
    return out;
}

std::optional<Substitution> match_pattern(const Term& pattern, const Term& instance,
                                          const Substitution& seed) {
    Substitution s = seed;
    if (!match_into(pattern, instance, s)) return std::nullopt;
    return s;
}

Term apply_subst(const Substitution& s, const Term& t) {
    switch (t.kind()) {
    case TermKind::Variable: {
        auto it = s.find(t.name());
        return it == s.end() ? t : it->second;
    }
    case TermKind::Compound: {
        if (s.empty()) return t;
        std::vector<Term> items;
        items.reserve(t.size());
        for (const auto& i : t.items()) items.push_back(apply_subst(s, i));
        return Term::list(std::move(items));
    }
    default: return t;
    }
}

std::string print_substitution(const Substitution& s) {
    std::string out = "(";
    bool first = true;
    for (const auto& [k, v] : s) {
        if (!first) out += ' ';
        first = false;
        out += "(?" + k + " " + print_canonical(v) + ")";
    }
    return out + ")";
}

} // namespace compmod
