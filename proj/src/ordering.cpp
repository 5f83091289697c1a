#include "ltr/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace ltr::ordering {

void PreferenceGraph::add(std::size_t i, std::size_t j) {
    if (i >= n || j >= n) {
        throw std::out_of_range("PreferenceGraph::add: vertex outside graph");
    }
    if (i == j) {
        throw std::invalid_argument("PreferenceGraph::add: self-loop at vertex " +
                                    std::to_string(i));
    }
    adj[i * n + j] = 1;
}

std::size_t PreferenceGraph::edge_count() const {
    std::size_t count = 0;
    for (std::uint8_t e : adj) count += e;
    return count;
}

PreferenceGraph build_graph(const Comparator& h, std::size_t n) {
    PreferenceGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (h(i, j) > 0.0) g.add(i, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (g.has(i, j) && g.has(j, i)) {
                throw std::runtime_error(
                    "build_graph: inconsistent comparator, h(" + std::to_string(i) +
                    "," + std::to_string(j) + ") and the reverse are both positive");
            }
        }
    }
    return g;
}

TopoResult topo_sort(const PreferenceGraph& g) {
    const std::size_t n = g.n;
    std::vector<std::size_t> in_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.has(i, j)) ++in_degree[j];
        }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> frontier;
    for (std::size_t v = 0; v < n; ++v) {
        if (in_degree[v] == 0) frontier.push(v);
    }

    TopoResult result;
    result.order.reserve(n);
    while (!frontier.empty()) {
        const std::size_t v = frontier.top();
        frontier.pop();
        result.order.push_back(v);
        for (std::size_t w = 0; w < n; ++w) {
            if (g.has(v, w) && --in_degree[w] == 0) frontier.push(w);
        }
    }

    result.is_dag = result.order.size() == n;
    if (!result.is_dag) {
        for (std::size_t v = 0; v < n; ++v) {
            if (in_degree[v] > 0) result.cycle_witness.push_back(v);
        }
        return result;
    }

    result.unique = true;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!g.has(result.order[k], result.order[k + 1])) {
            result.unique = false;
            break;
        }
    }
    return result;
}

std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("rank_by_score: non-finite score");
        }
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

bool verify_theorem1(std::span<const double> scores,
                     const std::function<double(double)>& psi) {
    const std::size_t n = scores.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (scores[i] == scores[j]) {
                throw std::invalid_argument(
                    "verify_theorem1: scores " + std::to_string(i) + " and " +
                    std::to_string(j) + " tie, which the no-tie hypothesis excludes");
            }
        }
    }

    const auto h = [&](std::size_t i, std::size_t j) {
        const double d = scores[i] - scores[j];
        return psi ? psi(d) : d;
    };
    const TopoResult topo = topo_sort(build_graph(h, n));
    if (!topo.is_dag || !topo.unique) return false;
    return topo.order == rank_by_score(scores);
}

bool verify_theorem1(const std::function<double(std::size_t)>& f, std::size_t n,
                     const std::function<double(double)>& psi) {
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = f(i);
    return verify_theorem1(scores, psi);
}

}  // namespace ltr::ordering
