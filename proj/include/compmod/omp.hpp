#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "compmod/error.hpp"

namespace compmod {

enum class PrefCmp { Equal, Less, Greater, Incomparable };

const char* to_string(PrefCmp c);
PrefCmp invert(PrefCmp c);

struct RawOrdering {
    std::vector<std::pair<std::string, std::string>> bpqs;            // (bpq, magnitude)
    std::vector<std::pair<std::string, std::string>> magnitude_order;  // lo << hi
    std::vector<std::pair<std::string, std::string>> bpq_order;        // lo < hi
    std::vector<std::string> magnitudes;  // optional extra (possibly empty) magnitudes
};

// Validated two-level ordering. BPQs and magnitudes are interned as dense
// indices in declaration order.
class BPQOrdering {
public:
    static std::shared_ptr<const BPQOrdering> validate(const RawOrdering& raw);

    std::size_t bpq_count() const { return bpq_names_.size(); }
    std::size_t magnitude_count() const { return mag_names_.size(); }
    const std::string& bpq_name(std::size_t b) const { return bpq_names_[b]; }
    const std::string& magnitude_name(std::size_t m) const { return mag_names_[m]; }
    std::size_t magnitude_of(std::size_t b) const { return bpq_mag_[b]; }
    const std::vector<std::size_t>& members(std::size_t m) const { return mag_members_[m]; }
    // Throws UnknownBPQ.
    std::size_t bpq_index(const std::string& name) const;
    std::size_t magnitude_index(const std::string& name) const;
    bool has_bpq(const std::string& name) const { return bpq_index_.count(name) > 0; }

    // Transitive closures.
    bool mag_less(std::size_t lo, std::size_t hi) const { return mag_lt_[lo][hi]; }
    bool bpq_less(std::size_t lo, std::size_t hi) const { return bpq_lt_[lo][hi]; }

    // Declaration form for dumps (the closed relations are not re-emitted).
    const RawOrdering& raw() const { return raw_; }

private:
    RawOrdering raw_;
    std::vector<std::string> bpq_names_, mag_names_;
    std::map<std::string, std::size_t> bpq_index_, mag_index_;
    std::vector<std::size_t> bpq_mag_;
    std::vector<std::vector<std::size_t>> mag_members_;
    std::vector<std::vector<bool>> mag_lt_, bpq_lt_;
};

using OrderingPtr = std::shared_ptr<const BPQOrdering>;

class OMP {
public:
    OMP() = default;
    explicit OMP(OrderingPtr ord) : ord_(std::move(ord)), counts_(ord_ ? ord_->bpq_count() : 0, 0) {}
    static OMP single(OrderingPtr ord, const std::string& bpq, unsigned count = 1);
    static OMP from_counts(OrderingPtr ord, const std::map<std::string, unsigned>& counts);

    const OrderingPtr& ordering() const { return ord_; }
    bool empty() const;
    unsigned count(std::size_t b) const { return b < counts_.size() ? counts_[b] : 0; }
    unsigned count(const std::string& bpq) const;
    void add(std::size_t b, unsigned n = 1);

    // "{b13:2 b21:3}" with BPQs in declaration order; "{}" when empty.
    std::string str() const;

    friend bool operator==(const OMP& a, const OMP& b);

private:
    OrderingPtr ord_;
    std::vector<unsigned> counts_;
};

OMP combine(const OMP& a, const OMP& b);

// f(b) plus the sum of f over the strict upper set of b within its magnitude.
unsigned cumulative_count(const OMP& p, std::size_t b);
bool leq_within(const OMP& p1, const OMP& p2, std::size_t magnitude);
PrefCmp compare_within(const OMP& p1, const OMP& p2, std::size_t magnitude);
bool leq(const OMP& p1, const OMP& p2);
PrefCmp compare(const OMP& p1, const OMP& p2);

// Per-BPQ maximum across candidates.
OMP envelope(const std::vector<OMP>& ps);

} // namespace compmod
