#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compmod/error.hpp"

namespace compmod {

// Exact rational with 64-bit parts, always normalised (den > 0, gcd 1).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d);
    std::string str() const;
    friend bool operator==(const Rational&, const Rational&) = default;
    friend auto operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
    }
};

enum class TermKind { Symbol, Number, Variable, Wildcard, Compound };

class Term {
public:
    Term() : kind_(TermKind::Compound) {}

    static Term symbol(std::string name);
    static Term number(Rational r);
    static Term number(std::int64_t n) { return number(Rational{n, 1}); }
    static Term variable(std::string name);
    static Term wildcard();
    static Term list(std::vector<Term> items);

    TermKind kind() const { return kind_; }
    bool is_symbol() const { return kind_ == TermKind::Symbol; }
    bool is_symbol(std::string_view s) const { return kind_ == TermKind::Symbol && text_ == s; }
    bool is_number() const { return kind_ == TermKind::Number; }
    bool is_variable() const { return kind_ == TermKind::Variable; }
    bool is_wildcard() const { return kind_ == TermKind::Wildcard; }
    bool is_compound() const { return kind_ == TermKind::Compound; }
    bool is_atom() const { return kind_ != TermKind::Compound; }

    // Symbol or variable name (without '?').
    const std::string& name() const { return text_; }
    const Rational& value() const { return num_; }
    const std::vector<Term>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    const Term& operator[](std::size_t i) const { return items_[i]; }
    // First element of a compound; callers check size() first.
    const Term& head() const { return items_.front(); }
    bool has_head(std::string_view s) const {
        return is_compound() && !items_.empty() && items_.front().is_symbol(s);
    }

    bool has_variables() const;
    bool has_wildcards() const;
    // Variable-free. Wildcards count as literal symbols once inside a ground term.
    bool is_ground() const { return !has_variables(); }
    void collect_variables(std::vector<std::string>& out) const;

    std::string str() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator<(const Term& a, const Term& b);

private:
    TermKind kind_;
    std::string text_;
    Rational num_;
    std::vector<Term> items_;
};

inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

using Substitution = std::map<std::string, Term>;

struct Positioned {
    Term term;
    int line;
};

std::vector<Term> parse(std::string_view text);
std::vector<Positioned> parse_with_positions(std::string_view text);
// Parses exactly one term; anything else raises MalformedTerm.
Term parse_one(std::string_view text);

std::string print_canonical(const Term& t);

std::optional<Substitution> match_pattern(const Term& pattern, const Term& instance,
                                          const Substitution& seed = {});

Term apply_subst(const Substitution& s, const Term& t);

// Renders {?a↦x, ...} as "((?a x) ...)" for dumps and node data.
std::string print_substitution(const Substitution& s);

} // namespace compmod
