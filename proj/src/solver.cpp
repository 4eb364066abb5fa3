#include <algorithm>
#include <deque>

#include "compmod/adpcsp.hpp"

namespace compmod {

namespace {

struct SearchNode {
    std::size_t id;
    Assignment solution;
    std::vector<bool> active;
    OMP cp;
    OMP pp;
    bool complete;
};

class Search {
public:
    Search(const ADPCSP& csp, const std::function<void(const SearchEvent&)>& observer, SolveStats& stats)
        : csp_(csp), observer_(observer), stats_(stats) {
        for (std::size_t x = 0; x < csp.attributes.size(); ++x) best_.push_back(best_preference(x));
    }

    std::vector<Solution> run(std::size_t max_solutions) {
        std::vector<Solution> accepted;
        if (max_solutions == 0) return accepted;
        Assignment root(csp_.attributes.size());
        if (!csp_.violates_compatibility(root)) open_.push_back(make_node(root, csp_.empty_omp()));
        while (!open_.empty() && accepted.size() < max_solutions) {
            auto it = champion();
            SearchNode n = std::move(*it);
            open_.erase(it);
            if (dominated(n.pp, accepted)) {
                prune(n, "potential preference dominated");
                continue;
            }
            if (n.complete) {
                emit(SearchEvent::Kind::Accept, n.id, n.cp.str(), &n);
                accepted.push_back({std::move(n.solution), std::move(n.cp)});
                continue;
            }
            expand(n, accepted);
        }
        return accepted;
    }

private:
    const ADPCSP& csp_;
    const std::function<void(const SearchEvent&)>& observer_;
    SolveStats& stats_;
    std::vector<OMP> best_;
    std::deque<SearchNode> open_;
    std::size_t next_id_ = 0;

    void emit(SearchEvent::Kind k, std::size_t id, std::string detail, const SearchNode* n = nullptr) {
        if (!observer_) return;
        SearchEvent e{k, id, std::move(detail)};
        if (n) {
            e.assignment = &n->solution;
            e.cp = &n->cp;
            e.pp = &n->pp;
        }
        observer_(e);
    }

    void prune(const SearchNode& n, const char* why) {
        ++stats_.pruned;
        emit(SearchEvent::Kind::Prune, n.id, why, &n);
    }

    // The greatest preference in the domain when there is one, otherwise the
    // per-BPQ envelope of all of them.
    OMP best_preference(std::size_t x) const {
        const auto& ps = csp_.prefs.at(x);
        if (ps.empty()) return csp_.empty_omp();
        for (const auto& p : ps)
            if (std::all_of(ps.begin(), ps.end(), [&](const OMP& q) { return leq(q, p); })) return p;
        return envelope(ps);
    }

    SearchNode make_node(Assignment a, OMP cp) {
        SearchNode n;
        n.id = next_id_++;
        ++stats_.created;
        n.active = csp_.activated(a);
        // Attributes that some trigger may still activate.
        std::vector<bool> possible = n.active;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : csp_.activity) {
                if (possible[c.target]) continue;
                bool ok = std::all_of(c.trigger.begin(), c.trigger.end(), [&](const AttrValue& p) {
                    return a[p.first] ? *a[p.first] == p.second : bool(possible[p.first]);
                });
                if (ok) possible[c.target] = changed = true;
            }
        }
        n.complete = true;
        n.pp = cp;
        for (std::size_t x = 0; x < a.size(); ++x) {
            if (a[x]) continue;
            if (n.active[x]) n.complete = false;
            if (possible[x]) n.pp = combine(n.pp, best_[x]);
        }
        n.cp = std::move(cp);
        n.solution = std::move(a);
        return n;
    }

    std::deque<SearchNode>::iterator champion() {
        auto best = open_.begin();
        bool moved = true;
        while (moved) {
            moved = false;
            for (auto it = open_.begin(); it != open_.end(); ++it)
                if (compare(it->pp, best->pp) == PrefCmp::Greater) {
                    best = it;
                    moved = true;
                    break;
                }
        }
        return best;
    }

    static bool dominated(const OMP& p, const std::vector<Solution>& accepted) {
        return std::any_of(accepted.begin(), accepted.end(),
                           [&](const Solution& s) { return compare(s.omp, p) == PrefCmp::Greater; });
    }

    void expand(const SearchNode& n, const std::vector<Solution>& accepted) {
        ++stats_.expanded;
        std::size_t x = 0;
        while (n.solution[x] || !n.active[x]) ++x;
        emit(SearchEvent::Kind::Expand, n.id, csp_.attributes[x].name, &n);
        for (std::size_t v = 0; v < csp_.attributes[x].domain.size(); ++v) {
            Assignment a = n.solution;
            a[x] = v;
            if (csp_.violates_compatibility(a)) {
                ++stats_.pruned;
                emit(SearchEvent::Kind::Reject, n.id, csp_.attributes[x].name + ":" + csp_.attributes[x].domain[v]);
                continue;
            }
            SearchNode child = make_node(std::move(a), combine(n.cp, csp_.prefs[x][v]));
            if (dominated(child.pp, accepted)) {
                prune(child, "potential preference dominated");
                continue;
            }
            open_.push_back(std::move(child));
        }
    }
};

} // namespace

std::vector<Solution> solve(const ADPCSP& csp, std::size_t max_solutions,
                            const std::function<void(const SearchEvent&)>& observer, SolveStats* stats) {
    SolveStats local;
    ADPCSP full = csp;
    full.normalise_prefs();
    Search s(full, observer, stats ? *stats : local);
    return s.run(max_solutions);
}

} // namespace compmod
