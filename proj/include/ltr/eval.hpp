#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltr/data.hpp"

namespace ltr::eval {

// NDCG@k with gain 2^grade - 1 and discount log2(position + 1). The ideal
// ordering sorts ideal_grades descending. All-zero ideals give 0 by
// convention. Throws std::invalid_argument when k < 1 or a grade is
// outside {0, 1, 2}.
double ndcg_at_k(std::span<const int> ranked_grades,
                 std::span<const int> ideal_grades, std::size_t k);

struct PerQueryNdcg {
    int query_id = 0;
    std::vector<double> ndcg;  // entry k-1 holds NDCG@k, k = 1..k_max
};

struct FoldEvaluation {
    std::vector<PerQueryNdcg> per_query;
    std::size_t skipped_empty = 0;  // groups with no judged documents
};

template <class Group>
using GroupScorer = std::function<std::vector<double>(const Group&)>;

// Scores every document of every group, ranks by descending score, and
// computes NDCG@1..k_max per query. Empty groups are skipped and counted.
template <class Group>
FoldEvaluation evaluate_groups(const std::vector<Group>& groups,
                               const GroupScorer<Group>& scorer,
                               std::size_t k_max = 10);

// One row per (query, k) pair; the unit the significance test consumes.
struct PerQueryRecord {
    int query_id = 0;
    int fold = 0;
    std::string method;
    std::size_t k = 0;
    double value = 0.0;
};

struct CrossValidateResult {
    std::vector<double> mean_ndcg;  // NDCG@1..k_max over all test queries
    std::vector<PerQueryRecord> records;
    std::size_t skipped_empty = 0;
};

// Builds a scorer for one fold from its train/validation splits.
template <class Group>
using FoldTrainer = std::function<GroupScorer<Group>(
    int fold, const std::vector<Group>& train, const std::vector<Group>& validation)>;

// Trains and evaluates every fold of the plan, one worker thread per fold
// when parallel is set. Results merge in fold order, so the output is
// deterministic either way. A training failure in any fold aborts the run
// with a diagnostic naming the fold.
template <class Group>
CrossValidateResult cross_validate(const std::vector<Group>& groups,
                                   const data::FoldPlan& plan,
                                   const FoldTrainer<Group>& trainer,
                                   const std::string& method,
                                   std::size_t k_max = 10, bool parallel = true);

struct MetricTable {
    // method name -> mean NDCG@1..k_max
    std::vector<std::pair<std::string, std::vector<double>>> rows;
};

std::string metric_table_tsv(const MetricTable& table);

std::string records_tsv(const std::vector<PerQueryRecord>& records);

// Parses the records TSV produced above (header line required). Throws
// std::runtime_error naming the offending line on malformed input.
std::vector<PerQueryRecord> parse_records_tsv(std::istream& in);

struct WilcoxonResult {
    double statistic = 0.0;  // W = min(W+, W-)
    double p_value = 1.0;
    std::size_t n_effective = 0;
};

// Two-tailed Wilcoxon signed-rank test on paired samples. Zero differences
// are dropped; tied magnitudes get average ranks. The p-value is exact
// (full sign-assignment distribution) for n_effective <= 20 and a
// tie-corrected normal approximation with continuity correction beyond
// that. Throws std::invalid_argument on length mismatch and
// std::domain_error when every difference is zero.
WilcoxonResult wilcoxon_two_tailed(std::span<const double> x,
                                   std::span<const double> y);

}  // namespace ltr::eval
