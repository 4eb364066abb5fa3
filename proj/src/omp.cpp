#include "compmod/omp.hpp"

#include <algorithm>
#include <deque>

namespace compmod {

const char* to_string(PrefCmp c) {
    switch (c) {
    case PrefCmp::Equal: return "equal";
    case PrefCmp::Less: return "less";
    case PrefCmp::Greater: return "greater";
    case PrefCmp::Incomparable: return "incomparable";
    }
    return "?";
}

PrefCmp invert(PrefCmp c) {
    if (c == PrefCmp::Less) return PrefCmp::Greater;
    if (c == PrefCmp::Greater) return PrefCmp::Less;
    return c;
}

namespace {

using Matrix = std::vector<std::vector<bool>>;

void close(Matrix& m) {
    std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (m[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
}

// Shortest path from `from` back to itself over the declared edges.
std::string cycle_witness(const std::vector<std::vector<std::size_t>>& adj, std::size_t from,
                          const std::vector<std::string>& names, const char* sep) {
    std::vector<long> prev(adj.size(), -1);
    std::deque<std::size_t> q;
    for (auto n : adj[from])
        if (prev[n] < 0) { prev[n] = static_cast<long>(from); q.push_back(n); }
    while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        if (u == from) break;
        for (auto n : adj[u])
            if (prev[n] < 0) { prev[n] = static_cast<long>(u); q.push_back(n); }
    }
    std::vector<std::size_t> path{from};
    for (std::size_t cur = static_cast<std::size_t>(prev[from]); cur != from;
         cur = static_cast<std::size_t>(prev[cur]))
        path.push_back(cur);
    path.push_back(from);
    std::reverse(path.begin() + 1, path.end() - 1);
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += sep;
        out += names[path[i]];
    }
    return out;
}

} // namespace

std::shared_ptr<const BPQOrdering> BPQOrdering::validate(const RawOrdering& raw) {
    auto o = std::make_shared<BPQOrdering>();
    o->raw_ = raw;
    auto intern_mag = [&](const std::string& m) {
        auto it = o->mag_index_.find(m);
        if (it != o->mag_index_.end()) return it->second;
        std::size_t id = o->mag_names_.size();
        o->mag_index_.emplace(m, id);
        o->mag_names_.push_back(m);
        o->mag_members_.emplace_back();
        return id;
    };
    for (const auto& m : raw.magnitudes) intern_mag(m);
    for (const auto& [b, m] : raw.bpqs) {
        std::size_t mi = intern_mag(m);
        auto it = o->bpq_index_.find(b);
        if (it != o->bpq_index_.end()) {
            if (o->bpq_mag_[it->second] != mi)
                throw Error("DuplicateBPQ", "'" + b + "' declared in two magnitudes");
            continue;
        }
        std::size_t id = o->bpq_names_.size();
        o->bpq_index_.emplace(b, id);
        o->bpq_names_.push_back(b);
        o->bpq_mag_.push_back(mi);
        o->mag_members_[mi].push_back(id);
    }
    std::size_t nm = o->mag_names_.size(), nb = o->bpq_names_.size();
    o->mag_lt_.assign(nm, std::vector<bool>(nm, false));
    o->bpq_lt_.assign(nb, std::vector<bool>(nb, false));
    std::vector<std::vector<std::size_t>> mag_adj(nm), bpq_adj(nb);
    for (const auto& [lo, hi] : raw.magnitude_order) {
        auto l = o->magnitude_index(lo), h = o->magnitude_index(hi);
        o->mag_lt_[l][h] = true;
        mag_adj[l].push_back(h);
    }
    for (const auto& [lo, hi] : raw.bpq_order) {
        auto l = o->bpq_index(lo), h = o->bpq_index(hi);
        if (o->bpq_mag_[l] != o->bpq_mag_[h])
            throw Error("CrossMagnitudePair", lo + " < " + hi + " spans magnitudes " +
                                                  o->mag_names_[o->bpq_mag_[l]] + " and " +
                                                  o->mag_names_[o->bpq_mag_[h]]);
        o->bpq_lt_[l][h] = true;
        bpq_adj[l].push_back(h);
    }
    close(o->mag_lt_);
    close(o->bpq_lt_);
    for (std::size_t i = 0; i < nm; ++i)
        if (o->mag_lt_[i][i])
            throw Error("CyclicOrder", cycle_witness(mag_adj, i, o->mag_names_, " << "));
    for (std::size_t i = 0; i < nb; ++i)
        if (o->bpq_lt_[i][i])
            throw Error("CyclicOrder", cycle_witness(bpq_adj, i, o->bpq_names_, " < "));
    return o;
}

std::size_t BPQOrdering::bpq_index(const std::string& name) const {
    auto it = bpq_index_.find(name);
    if (it == bpq_index_.end()) throw Error("UnknownBPQ", name);
    return it->second;
}

std::size_t BPQOrdering::magnitude_index(const std::string& name) const {
    auto it = mag_index_.find(name);
    if (it == mag_index_.end()) throw Error("UnknownMagnitude", name);
    return it->second;
}

OMP OMP::single(OrderingPtr ord, const std::string& bpq, unsigned count) {
    OMP p(ord);
    p.add(ord->bpq_index(bpq), count);
    return p;
}

OMP OMP::from_counts(OrderingPtr ord, const std::map<std::string, unsigned>& counts) {
    OMP p(ord);
    for (const auto& [b, n] : counts) p.add(ord->bpq_index(b), n);
    return p;
}

bool OMP::empty() const {
    return std::all_of(counts_.begin(), counts_.end(), [](unsigned c) { return c == 0; });
}

unsigned OMP::count(const std::string& bpq) const {
    if (!ord_) return 0;
    return count(ord_->bpq_index(bpq));
}

void OMP::add(std::size_t b, unsigned n) {
    if (!ord_ || b >= counts_.size()) throw Error("UnknownBPQ", "index " + std::to_string(b));
    counts_[b] += n;
}

std::string OMP::str() const {
    std::string out = "{";
    bool first = true;
    for (std::size_t b = 0; b < counts_.size(); ++b) {
        if (!counts_[b]) continue;
        if (!first) out += ' ';
        first = false;
        out += ord_->bpq_name(b) + ":" + std::to_string(counts_[b]);
    }
    return out + "}";
}

bool operator==(const OMP& a, const OMP& b) {
    std::size_t n = std::max(a.counts_.size(), b.counts_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a.count(i) != b.count(i)) return false;
    return true;
}

namespace {

const OrderingPtr& shared_ordering(const OMP& a, const OMP& b) {
    if (a.ordering() && b.ordering() && a.ordering() != b.ordering())
        throw Error("MixedOrdering", "OMPs are governed by different orderings");
    return a.ordering() ? a.ordering() : b.ordering();
}

} // namespace

OMP combine(const OMP& a, const OMP& b) {
    const auto& ord = shared_ordering(a, b);
    if (!ord) return OMP();
    OMP out(ord);
    for (std::size_t i = 0; i < ord->bpq_count(); ++i) {
        unsigned n = a.count(i) + b.count(i);
        if (n) out.add(i, n);
    }
    return out;
}

unsigned cumulative_count(const OMP& p, std::size_t b) {
    unsigned total = p.count(b);
    const auto& ord = p.ordering();
    if (!ord) return total;
    for (auto j : ord->members(ord->magnitude_of(b)))
        if (ord->bpq_less(b, j)) total += p.count(j);
    return total;
}

bool leq_within(const OMP& p1, const OMP& p2, std::size_t magnitude) {
    const auto& ord = shared_ordering(p1, p2);
    if (!ord) return true;
    for (auto b : ord->members(magnitude))
        if (cumulative_count(p1, b) > cumulative_count(p2, b)) return false;
    return true;
}

namespace {

PrefCmp classify(bool le, bool ge) {
    if (le && ge) return PrefCmp::Equal;
    if (le) return PrefCmp::Less;
    if (ge) return PrefCmp::Greater;
    return PrefCmp::Incomparable;
}

} // namespace

PrefCmp compare_within(const OMP& p1, const OMP& p2, std::size_t magnitude) {
    return classify(leq_within(p1, p2, magnitude), leq_within(p2, p1, magnitude));
}

bool leq(const OMP& p1, const OMP& p2) {
    const auto& ord = shared_ordering(p1, p2);
    if (!ord) return true;
    std::size_t nm = ord->magnitude_count();
    std::vector<PrefCmp> within(nm);
    for (std::size_t m = 0; m < nm; ++m) within[m] = compare_within(p1, p2, m);
    for (std::size_t i = 0; i < nm; ++i) {
        if (within[i] == PrefCmp::Less || within[i] == PrefCmp::Equal) continue;
        bool rescued = false;
        for (std::size_t j = 0; j < nm && !rescued; ++j)
            rescued = ord->mag_less(i, j) && within[j] == PrefCmp::Less;
        if (!rescued) return false;
    }
    return true;
}

PrefCmp compare(const OMP& p1, const OMP& p2) { return classify(leq(p1, p2), leq(p2, p1)); }

OMP envelope(const std::vector<OMP>& ps) {
    OrderingPtr ord;
    for (const auto& p : ps)
        if (p.ordering()) { ord = p.ordering(); break; }
    if (!ord) return OMP();
    OMP out(ord);
    for (std::size_t b = 0; b < ord->bpq_count(); ++b) {
        unsigned m = 0;
        for (const auto& p : ps) m = std::max(m, p.count(b));
        if (m) out.add(b, m);
    }
    return out;
}

} // namespace compmod
