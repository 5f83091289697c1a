#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ltr::ordering {

// Directed graph over document indices; edge (i, j) means document i
// precedes document j. When built from a no-tie comparator it is a
// tournament: exactly one of (i, j), (j, i) for every i != j.
struct PreferenceGraph {
    std::size_t n = 0;
    std::vector<std::uint8_t> adj;  // n x n, row-major

    PreferenceGraph() = default;
    explicit PreferenceGraph(std::size_t count) : n(count), adj(count * count, 0) {}

    bool has(std::size_t i, std::size_t j) const { return adj[i * n + j] != 0; }

    // Throws std::invalid_argument on self-loops, std::out_of_range outside n.
    void add(std::size_t i, std::size_t j);

    std::size_t edge_count() const;
};

// h(i, j) > 0 reads "document i preferred over document j".
using Comparator = std::function<double(std::size_t, std::size_t)>;

// Materializes h over all ordered pairs (n^2 evaluations). Throws
// std::runtime_error if h(i, j) and h(j, i) are both positive.
PreferenceGraph build_graph(const Comparator& h, std::size_t n);

struct TopoResult {
    // Complete when is_dag; the vertices emitted before the stall otherwise.
    std::vector<std::size_t> order;
    bool is_dag = false;
    // Every consecutive pair in order joined by an edge (the Hamiltonian
    // path condition), which makes the topological order the only one.
    bool unique = false;
    // Vertices with nonzero in-degree when the frontier emptied; empty for
    // a DAG.
    std::vector<std::size_t> cycle_witness;
};

// Kahn's algorithm with a smallest-index frontier, so the emitted order is
// deterministic. A cycle is a reported outcome, not an error.
TopoResult topo_sort(const PreferenceGraph& g);

// Indices ordered by descending score, ties broken by ascending index.
// Throws std::invalid_argument on non-finite scores.
std::vector<std::size_t> rank_by_score(std::span<const double> scores);

// Checks that sorting by score and topologically sorting the tournament
// induced by h(i, j) = psi(score_i - score_j) produce the same permutation.
// psi must preserve sign (identity when omitted). Throws
// std::invalid_argument when two scores tie, which the no-tie hypothesis
// excludes.
bool verify_theorem1(std::span<const double> scores,
                     const std::function<double(double)>& psi = {});
bool verify_theorem1(const std::function<double(std::size_t)>& f, std::size_t n,
                     const std::function<double(double)>& psi = {});

}  // namespace ltr::ordering
