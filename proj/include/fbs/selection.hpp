#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbs/metrics.hpp"

namespace fbs {

// Conflict graph: one node per filter, an edge per pair whose distance falls
// below the current threshold. Edges are stored normalized (i < j, sorted,
// deduplicated).
class ConflictGraph {
public:
    ConflictGraph(std::size_t node_count, std::vector<std::pair<std::size_t, std::size_t>> edges);

    std::size_t node_count() const { return nodes_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

private:
    std::size_t nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// Chosen filter indices, sorted ascending, no duplicates.
class SelectionVector {
public:
    SelectionVector() = default;
    explicit SelectionVector(std::vector<std::size_t> chosen);

    const std::vector<std::size_t>& chosen() const { return chosen_; }
    std::size_t size() const { return chosen_.size(); }
    bool contains(std::size_t index) const;

private:
    std::vector<std::size_t> chosen_;
};

enum class FeasibilityMode {
    early_exit, // stop as soon as any independent set of size >= target exists
    exact_max   // always prove a maximum independent set
};

struct FbsConfig {
    std::size_t k = 2;
    int iterations = 20;
    FeasibilityMode feasibility_mode = FeasibilityMode::early_exit;
    // Paper-literal lower bound theta_min = min(A) = 0 instead of the minimum
    // off-diagonal entry.
    bool literal_min_bound = false;
    // Explicit starting bounds, overriding the ones derived from A.
    std::optional<std::pair<double, double>> initial_bounds;
    // Optional early stop once theta_max - theta_min falls below this width.
    std::optional<double> min_bracket;
};

struct IterationRecord {
    double theta_curr = 0.0;
    bool feasible = false;
    std::size_t set_size = 0; // size of the independent set found at this theta
};

struct SelectionResult {
    SelectionVector selection;
    // Exact minimum pairwise distance of the returned selection, recomputed
    // from A (not the binary-search bound). +infinity for a singleton.
    double achieved_min_distance = 0.0;
    std::pair<double, double> theta_bounds_final{0.0, 0.0};
    int iterations_run = 0;
    std::int64_t feasibility_calls = 0;
    double wall_time_s = 0.0;
    std::vector<IterationRecord> trace;
};

// Edge (i, j) present iff i != j and a_ij < theta (strict).
ConflictGraph build_conflict_graph(const AdjacencyMatrix& adjacency, double theta);

// Exact maximum independent set via branch and bound (greedy clique-cover
// bound, highest-degree-first branching, lower index explored first). With a
// target and early_exit mode, returns the first independent set of size >=
// target encountered; otherwise the proven maximum.
SelectionVector max_independent_set(const ConflictGraph& graph,
                                    std::optional<std::size_t> target = std::nullopt,
                                    FeasibilityMode mode = FeasibilityMode::exact_max);

// Binary search over the distance threshold with an exact independent-set
// feasibility check per iteration.
SelectionResult fbs_select(const AdjacencyMatrix& adjacency, const FbsConfig& config);

// Exhaustive K-subset enumeration maximizing the minimum pairwise distance.
// Ties resolve to the lexicographically smallest index set. Refuses to run
// when C(N, K) exceeds `guard`.
SelectionResult full_search(const AdjacencyMatrix& adjacency, std::size_t k,
                            std::uint64_t guard = 1'000'000'000ull);

// Evenly spaced index baseline: round(i * (N - 1) / (K - 1)).
SelectionVector uniform_selection(std::size_t node_count, std::size_t k);

// Removes nodes until exactly k remain: repeatedly drop the node whose
// minimum distance to the rest is smallest (ties drop the larger index).
// Never decreases the set's minimum pairwise distance.
SelectionVector trim_selection(const SelectionVector& selection, const AdjacencyMatrix& adjacency,
                               std::size_t k);

// Minimum a_ij over unordered chosen pairs; requires at least two indices.
double min_pairwise_distance(const SelectionVector& selection, const AdjacencyMatrix& adjacency);

// C(n, k), saturating at 2^63 - 1 instead of overflowing.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

} // namespace fbs
