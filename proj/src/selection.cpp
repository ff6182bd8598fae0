#include "fbs/selection.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "fbs/errors.hpp"

namespace fbs {

ConflictGraph::ConflictGraph(std::size_t node_count,
                             std::vector<std::pair<std::size_t, std::size_t>> edges)
    : nodes_(node_count), edges_(std::move(edges)) {
    for (auto& [i, j] : edges_) {
        if (i == j) throw DataError("conflict graph cannot contain self-loops");
        if (i > j) std::swap(i, j);
        if (j >= nodes_) throw DataError("conflict graph edge index out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

SelectionVector::SelectionVector(std::vector<std::size_t> chosen) : chosen_(std::move(chosen)) {
    std::sort(chosen_.begin(), chosen_.end());
    if (std::adjacent_find(chosen_.begin(), chosen_.end()) != chosen_.end()) {
        throw ConfigError("selection contains duplicate indices");
    }
}

bool SelectionVector::contains(std::size_t index) const {
    return std::binary_search(chosen_.begin(), chosen_.end(), index);
}

ConflictGraph build_conflict_graph(const AdjacencyMatrix& adjacency, double theta) {
    if (!std::isfinite(theta)) throw ConfigError("threshold must be finite");
    const std::size_t n = adjacency.size();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacency.at(i, j) < theta) edges.emplace_back(i, j);
        }
    }
    return ConflictGraph(n, std::move(edges));
}

namespace {

// Fixed-size bitset over 64-bit words.
class NodeSet {
public:
    explicit NodeSet(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    bool empty() const {
        for (auto w : words_) {
            if (w) return false;
        }
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t count_and(const NodeSet& other) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
        }
        return c;
    }

    void intersect(const NodeSet& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    }

    void subtract(const NodeSet& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
    }

    // First set bit at or after `from`, or npos.
    std::size_t next(std::size_t from) const {
        if (from >= bits_) return npos;
        std::size_t w = from >> 6;
        std::uint64_t word = words_[w] & (~0ull << (from & 63));
        while (true) {
            if (word) return (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
            if (++w == words_.size()) return npos;
            word = words_[w];
        }
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t bits_;
    std::vector<std::uint64_t> words_;
};

// Exact maximum-independent-set search: branch and bound with a greedy
// clique-cover bound and highest-degree-first branching. Exploration order is
// fully deterministic (ties pick the lower index).
class MisSolver {
public:
    MisSolver(const ConflictGraph& graph, std::optional<std::size_t> target, FeasibilityMode mode)
        : n_(graph.node_count()),
          adj_(n_, NodeSet(n_)),
          target_(target),
          early_exit_(mode == FeasibilityMode::early_exit && target.has_value()) {
        for (const auto& [i, j] : graph.edges()) {
            adj_[i].set(j);
            adj_[j].set(i);
        }
    }

    std::vector<std::size_t> solve() {
        NodeSet all(n_);
        for (std::size_t v = 0; v < n_; ++v) all.set(v);
        current_.reserve(n_);
        expand(all);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    void record_if_better() {
        if (current_.size() > best_.size()) {
            best_ = current_;
            if (early_exit_ && best_.size() >= *target_) done_ = true;
        }
    }

    // Greedy clique cover of `candidates`: an independent set takes at most
    // one node per clique, so the class count bounds the attainable size.
    std::size_t clique_cover_bound(const NodeSet& candidates) const {
        std::vector<NodeSet> cliques; // each stores the common neighborhood of its members
        for (std::size_t v = candidates.next(0); v != NodeSet::npos; v = candidates.next(v + 1)) {
            bool placed = false;
            for (auto& common : cliques) {
                if (common.test(v)) {
                    common.intersect(adj_[v]);
                    placed = true;
                    break;
                }
            }
            if (!placed) cliques.push_back(adj_[v]);
        }
        return cliques.size();
    }

    void expand(NodeSet candidates) {
        if (done_) return;

        // Candidates without conflicts among the candidates are always taken.
        // Removing them leaves every other degree unchanged.
        std::size_t auto_added = 0;
        for (std::size_t v = candidates.next(0); v != NodeSet::npos;
             v = candidates.next(v + 1)) {
            if (adj_[v].count_and(candidates) == 0) {
                current_.push_back(v);
                candidates.reset(v);
                ++auto_added;
            }
        }
        if (auto_added > 0) record_if_better();

        if (!done_ && !candidates.empty() &&
            current_.size() + clique_cover_bound(candidates) > best_.size()) {
            std::size_t branch_vertex = NodeSet::npos;
            std::size_t branch_degree = 0;
            for (std::size_t v = candidates.next(0); v != NodeSet::npos;
                 v = candidates.next(v + 1)) {
                const std::size_t deg = adj_[v].count_and(candidates);
                if (branch_vertex == NodeSet::npos || deg > branch_degree) {
                    branch_vertex = v;
                    branch_degree = deg;
                }
            }

            // include the branch vertex
            current_.push_back(branch_vertex);
            record_if_better();
            if (!done_) {
                NodeSet included = candidates;
                included.subtract(adj_[branch_vertex]);
                included.reset(branch_vertex);
                expand(included);
            }
            current_.pop_back();

            // exclude it
            if (!done_) {
                NodeSet excluded = candidates;
                excluded.reset(branch_vertex);
                expand(excluded);
            }
        }

        current_.resize(current_.size() - auto_added);
    }

    std::size_t n_;
    std::vector<NodeSet> adj_;
    std::optional<std::size_t> target_;
    bool early_exit_;
    bool done_ = false;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
};

} // namespace

SelectionVector max_independent_set(const ConflictGraph& graph, std::optional<std::size_t> target,
                                    FeasibilityMode mode) {
    if (graph.node_count() == 0) return SelectionVector();
    MisSolver solver(graph, target, mode);
    return SelectionVector(solver.solve());
}

double min_pairwise_distance(const SelectionVector& selection, const AdjacencyMatrix& adjacency) {
    const auto& idx = selection.chosen();
    if (idx.size() < 2) throw ConfigError("minimum pairwise distance needs at least 2 indices");
    if (idx.back() >= adjacency.size()) throw ConfigError("selection index out of range");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            best = std::min(best, adjacency.at(idx[a], idx[b]));
        }
    }
    return best;
}

SelectionVector trim_selection(const SelectionVector& selection, const AdjacencyMatrix& adjacency,
                               std::size_t k) {
    if (k < 1) throw ConfigError("k must be at least 1");
    if (selection.size() < k) throw ConfigError("selection is smaller than k");
    if (!selection.chosen().empty() && selection.chosen().back() >= adjacency.size()) {
        throw ConfigError("selection index out of range");
    }
    std::vector<std::size_t> idx = selection.chosen();
    while (idx.size() > k) {
        std::size_t drop = 0;
        double drop_min = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < idx.size(); ++a) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if (a != b) m = std::min(m, adjacency.at(idx[a], idx[b]));
            }
            // <= keeps the largest index among ties
            if (m <= drop_min) {
                drop_min = m;
                drop = a;
            }
        }
        idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    return SelectionVector(std::move(idx));
}

SelectionVector uniform_selection(std::size_t node_count, std::size_t k) {
    if (node_count == 0) throw ConfigError("cannot select from an empty set");
    if (k < 1 || k > node_count) throw ConfigError("k must be in [1, N]");
    std::vector<std::size_t> idx;
    idx.reserve(k);
    if (k == 1) {
        idx.push_back((node_count - 1) / 2);
    } else {
        for (std::size_t i = 0; i < k; ++i) {
            const double pos = static_cast<double>(i) * static_cast<double>(node_count - 1) /
                               static_cast<double>(k - 1);
            idx.push_back(static_cast<std::size_t>(std::llround(pos)));
        }
    }
    return SelectionVector(std::move(idx));
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    constexpr std::uint64_t saturated = std::numeric_limits<std::int64_t>::max();
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i; // stays integral: r == C(n - k + i, i)
        if (r > saturated) return saturated;
    }
    return static_cast<std::uint64_t>(r);
}

SelectionResult fbs_select(const AdjacencyMatrix& adjacency, const FbsConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = adjacency.size();
    if (n < 2) throw ConfigError("selection needs at least 2 filters (no pairs to optimize)");
    if (config.k < 1 || config.k > n) {
        throw ConfigError("k = " + std::to_string(config.k) + " must be in [1, " +
                          std::to_string(n) + "]");
    }
    if (config.iterations < 1) throw ConfigError("iterations must be >= 1");

    double theta_min, theta_max;
    if (config.initial_bounds) {
        theta_min = config.initial_bounds->first;
        theta_max = config.initial_bounds->second;
        if (!(theta_min <= theta_max)) throw ConfigError("initial bounds must satisfy lo <= hi");
    } else {
        // min(A) is literally 0 (the diagonal); the off-diagonal minimum is a
        // tighter start that can never exclude a feasible optimum.
        theta_min = config.literal_min_bound ? 0.0 : adjacency.min_off_diagonal();
        theta_max = adjacency.max_entry();
    }

    SelectionResult result;
    result.trace.reserve(static_cast<std::size_t>(config.iterations));

    // The lower bound itself is always feasible (strict comparison: no pair
    // falls below it), so start from the full index set.
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    SelectionVector last_feasible(std::move(all));

    for (int it = 0; it < config.iterations; ++it) {
        const double theta_curr = (theta_min + theta_max) / 2.0;
        const ConflictGraph graph = build_conflict_graph(adjacency, theta_curr);
        const SelectionVector found =
            max_independent_set(graph, config.k, config.feasibility_mode);
        ++result.feasibility_calls;
        const bool feasible = found.size() >= config.k;
        result.trace.push_back({theta_curr, feasible, found.size()});
        if (feasible) {
            theta_min = theta_curr;
            last_feasible = found;
        } else {
            theta_max = theta_curr;
        }
        ++result.iterations_run;
        if (config.min_bracket && theta_max - theta_min < *config.min_bracket) break;
    }

    result.selection = trim_selection(last_feasible, adjacency, config.k);
    result.achieved_min_distance = config.k >= 2
                                       ? min_pairwise_distance(result.selection, adjacency)
                                       : std::numeric_limits<double>::infinity();
    result.theta_bounds_final = {theta_min, theta_max};
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

namespace {

struct FullSearchState {
    const AdjacencyMatrix& adjacency;
    std::size_t k;
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> best;
    double best_min = -std::numeric_limits<double>::infinity();

    void recurse(std::size_t start, double running_min) {
        const std::size_t n = adjacency.size();
        if (chosen.size() == k) {
            if (running_min > best_min) { // strict: keeps the lexicographically first optimum
                best_min = running_min;
                best = chosen;
            }
            return;
        }
        const std::size_t needed = k - chosen.size();
        for (std::size_t idx = start; idx + needed <= n; ++idx) {
            double new_min = running_min;
            for (std::size_t prev : chosen) {
                new_min = std::min(new_min, adjacency.at(prev, idx));
            }
            if (new_min <= best_min) continue; // branch-skip: cannot beat the best
            chosen.push_back(idx);
            recurse(idx + 1, new_min);
            chosen.pop_back();
        }
    }
};

} // namespace

SelectionResult full_search(const AdjacencyMatrix& adjacency, std::size_t k, std::uint64_t guard) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = adjacency.size();
    if (n < 2) throw ConfigError("selection needs at least 2 filters (no pairs to optimize)");
    if (k < 1 || k > n) {
        throw ConfigError("k = " + std::to_string(k) + " must be in [1, " + std::to_string(n) +
                          "]");
    }
    const std::uint64_t combos = binomial_saturating(n, k);
    if (combos > guard) {
        throw GuardError("full search over C(" + std::to_string(n) + ", " + std::to_string(k) +
                         ") = " + std::to_string(combos) + " combinations exceeds the guard of " +
                         std::to_string(guard));
    }

    FullSearchState state{adjacency, k, {}, {}, -std::numeric_limits<double>::infinity()};
    state.chosen.reserve(k);
    state.recurse(0, std::numeric_limits<double>::infinity());

    SelectionResult result;
    result.selection = SelectionVector(std::move(state.best));
    result.achieved_min_distance = k >= 2 ? state.best_min
                                          : std::numeric_limits<double>::infinity();
    result.theta_bounds_final = {result.achieved_min_distance, result.achieved_min_distance};
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace fbs
