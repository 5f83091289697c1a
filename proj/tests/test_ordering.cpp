#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ltr/ordering.hpp"
#include "ltr/rng.hpp"

using namespace ltr;

TEST_CASE("rank_by_score sorts descending with ascending-index ties") {
    const std::vector<double> scores{0.1, 0.9, 0.5};
    CHECK(ordering::rank_by_score(scores) == std::vector<std::size_t>{1, 2, 0});

    CHECK(ordering::rank_by_score(std::vector<double>{3.0}) ==
          std::vector<std::size_t>{0});
    CHECK(ordering::rank_by_score(std::vector<double>{}).empty());

    const std::vector<double> tied{1.0, 2.0, 1.0, 2.0};
    CHECK(ordering::rank_by_score(tied) == std::vector<std::size_t>{1, 3, 0, 2});

    CHECK_THROWS_AS(
        ordering::rank_by_score(std::vector<double>{1.0, std::nan("")}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ordering::rank_by_score(
            std::vector<double>{std::numeric_limits<double>::infinity()}),
        std::invalid_argument);
}

TEST_CASE("PreferenceGraph rejects self-loops and out-of-range vertices") {
    ordering::PreferenceGraph g(3);
    g.add(0, 1);
    g.add(0, 1);  // idempotent
    CHECK(g.has(0, 1));
    CHECK(!g.has(1, 0));
    CHECK(g.edge_count() == 1);
    CHECK_THROWS_AS(g.add(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add(0, 3), std::out_of_range);
    CHECK_THROWS_AS(g.add(3, 0), std::out_of_range);
}

TEST_CASE("build_graph materializes a tournament from a no-tie comparator") {
    const std::vector<double> f{2.0, 0.5, 1.0, 3.0};
    const auto g = ordering::build_graph(
        [&](std::size_t i, std::size_t j) { return f[i] - f[j]; }, f.size());
    CHECK(g.n == 4);
    CHECK(g.edge_count() == 6);  // n(n-1)/2
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            CHECK(g.has(i, j) == (f[i] > f[j]));
            CHECK(g.has(i, j) != g.has(j, i));
        }
    }

    const auto empty = ordering::build_graph([](std::size_t, std::size_t) { return 1.0; }, 0);
    CHECK(empty.edge_count() == 0);
    CHECK(ordering::topo_sort(empty).is_dag);
}

TEST_CASE("build_graph rejects a comparator that prefers both directions") {
    CHECK_THROWS_AS(
        ordering::build_graph([](std::size_t, std::size_t) { return 1.0; }, 2),
        std::runtime_error);
}

TEST_CASE("topo_sort emits a chain in its unique order") {
    // 2 -> 0 -> 1, complete tournament
    ordering::PreferenceGraph g(3);
    g.add(2, 0);
    g.add(0, 1);
    g.add(2, 1);
    const auto result = ordering::topo_sort(g);
    CHECK(result.is_dag);
    CHECK(result.unique);
    CHECK(result.order == std::vector<std::size_t>{2, 0, 1});
    CHECK(result.cycle_witness.empty());
}

TEST_CASE("topo_sort reports a 3-cycle through its witness") {
    ordering::PreferenceGraph g(3);
    g.add(0, 1);
    g.add(1, 2);
    g.add(2, 0);
    const auto result = ordering::topo_sort(g);
    CHECK(!result.is_dag);
    CHECK(!result.unique);
    CHECK(result.order.empty());
    CHECK(result.cycle_witness == std::vector<std::size_t>{0, 1, 2});

    // cycle reachable only after a prefix is emitted
    ordering::PreferenceGraph h(4);
    h.add(0, 1);
    h.add(1, 2);
    h.add(2, 3);
    h.add(3, 1);
    const auto partial = ordering::topo_sort(h);
    CHECK(!partial.is_dag);
    CHECK(partial.order == std::vector<std::size_t>{0});
    CHECK(partial.cycle_witness == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("topo_sort flags non-unique orders of a sparse DAG") {
    // 0 -> 1, 0 -> 2: both {0,1,2} and {0,2,1} are valid
    ordering::PreferenceGraph g(3);
    g.add(0, 1);
    g.add(0, 2);
    const auto result = ordering::topo_sort(g);
    CHECK(result.is_dag);
    CHECK(!result.unique);
    CHECK(result.order == std::vector<std::size_t>{0, 1, 2});  // smallest index first
}

TEST_CASE("verify_theorem1 accepts distinct scores and rejects ties") {
    CHECK(ordering::verify_theorem1(std::vector<double>{0.3, 1.2, -0.5}));
    CHECK(ordering::verify_theorem1(std::vector<double>{42.0}));
    CHECK(ordering::verify_theorem1(std::vector<double>{}));
    CHECK_THROWS_AS(
        ordering::verify_theorem1(std::vector<double>{1.0, 2.0, 1.0}),
        std::invalid_argument);
}

TEST_CASE("verify_theorem1 agrees with sorting for random scores") {
    // identity and a monotone odd transfer; both preserve the sign of the
    // score difference, so the tournament they induce is the same
    const std::function<double(double)> cube = [](double d) { return d * d * d; };
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::uint64_t s = 0; s < 100; ++s) {
            Rng rng(Rng(999).split(n * 131 + s).seed());
            std::vector<double> scores(n);
            for (auto& v : scores) v = rng.uniform(-10.0, 10.0);
            CHECK(ordering::verify_theorem1(scores));
            CHECK(ordering::verify_theorem1(scores, cube));
        }
    }
}

TEST_CASE("verify_theorem1 score-function overload matches the span form") {
    const std::vector<double> scores{0.25, -1.5, 3.0, 0.75};
    const auto f = [&](std::size_t i) { return scores[i]; };
    CHECK(ordering::verify_theorem1(f, scores.size()));
}

TEST_CASE("topological order equals the sort order on exhaustive permutations") {
    // all 4! = 24 score permutations of distinct values: the tournament sort
    // must reproduce exactly the descending order every time
    std::vector<double> values{-2.0, 1.0, 5.0, 9.0};
    std::sort(values.begin(), values.end());
    do {
        const auto graph = ordering::build_graph(
            [&](std::size_t i, std::size_t j) { return values[i] - values[j]; },
            values.size());
        const auto topo = ordering::topo_sort(graph);
        REQUIRE(topo.is_dag);
        REQUIRE(topo.unique);
        CHECK(topo.order == ordering::rank_by_score(values));
    } while (std::next_permutation(values.begin(), values.end()));
}
