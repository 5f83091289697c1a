#include "ltr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ltr/ordering.hpp"

namespace ltr::eval {

namespace {

double dcg_at_k(std::span<const int> grades, std::size_t k) {
    const std::size_t top = std::min(k, grades.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < top; ++i) {
        dcg += (std::exp2(double(grades[i])) - 1.0) / std::log2(double(i) + 2.0);
    }
    return dcg;
}

void check_grades(std::span<const int> grades, const char* what) {
    for (int g : grades) {
        if (!data::valid_grade(g)) {
            throw std::invalid_argument(std::string("ndcg_at_k: invalid ") + what +
                                        " grade " + std::to_string(g));
        }
    }
}

}  // namespace

double ndcg_at_k(std::span<const int> ranked_grades,
                 std::span<const int> ideal_grades, std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("ndcg_at_k: k must be >= 1");
    }
    check_grades(ranked_grades, "ranked");
    check_grades(ideal_grades, "ideal");

    std::vector<int> ideal(ideal_grades.begin(), ideal_grades.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const double idcg = dcg_at_k(ideal, k);
    if (idcg == 0.0) return 0.0;
    return dcg_at_k(ranked_grades, k) / idcg;
}

template <class Group>
FoldEvaluation evaluate_groups(const std::vector<Group>& groups,
                               const GroupScorer<Group>& scorer,
                               std::size_t k_max) {
    if (k_max < 1) {
        throw std::invalid_argument("evaluate_groups: k_max must be >= 1");
    }
    FoldEvaluation out;
    for (const Group& group : groups) {
        if (group.docs.empty()) {
            ++out.skipped_empty;
            continue;
        }
        const std::vector<double> scores = scorer(group);
        if (scores.size() != group.docs.size()) {
            throw std::runtime_error("evaluate_groups: scorer returned " +
                                     std::to_string(scores.size()) + " scores for " +
                                     std::to_string(group.docs.size()) + " documents");
        }
        const std::vector<std::size_t> order = ordering::rank_by_score(scores);

        std::vector<int> ranked(group.docs.size());
        std::vector<int> ideal(group.docs.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            ranked[i] = group.docs[order[i]].grade;
            ideal[i] = group.docs[i].grade;
        }

        PerQueryNdcg row;
        row.query_id = group.query_id;
        row.ndcg.reserve(k_max);
        for (std::size_t k = 1; k <= k_max; ++k) {
            row.ndcg.push_back(ndcg_at_k(ranked, ideal, k));
        }
        out.per_query.push_back(std::move(row));
    }
    return out;
}

template FoldEvaluation evaluate_groups<data::FeatureGroup>(
    const std::vector<data::FeatureGroup>&, const GroupScorer<data::FeatureGroup>&,
    std::size_t);
template FoldEvaluation evaluate_groups<data::TextGroup>(
    const std::vector<data::TextGroup>&, const GroupScorer<data::TextGroup>&,
    std::size_t);

template <class Group>
CrossValidateResult cross_validate(const std::vector<Group>& groups,
                                   const data::FoldPlan& plan,
                                   const FoldTrainer<Group>& trainer,
                                   const std::string& method,
                                   std::size_t k_max, bool parallel) {
    constexpr int kFolds = 5;
    std::vector<FoldEvaluation> fold_eval(kFolds);
    std::vector<std::string> fold_error(kFolds);

    const auto run_fold = [&](int fold) {
        try {
            const data::FoldSplit<Group> split = data::make_folds(groups, plan, fold + 1);
            const GroupScorer<Group> scorer =
                trainer(fold + 1, split.train, split.validation);
            fold_eval[fold] = evaluate_groups(split.test, scorer, k_max);
        } catch (const std::exception& e) {
            fold_error[fold] = e.what();
        }
    };

    if (parallel) {
        std::vector<std::thread> workers;
        workers.reserve(kFolds);
        for (int fold = 0; fold < kFolds; ++fold) {
            workers.emplace_back(run_fold, fold);
        }
        for (std::thread& w : workers) w.join();
    } else {
        for (int fold = 0; fold < kFolds; ++fold) run_fold(fold);
    }

    for (int fold = 0; fold < kFolds; ++fold) {
        if (!fold_error[fold].empty()) {
            throw std::runtime_error("cross_validate: fold " + std::to_string(fold + 1) +
                                     " failed: " + fold_error[fold]);
        }
    }

    CrossValidateResult result;
    result.mean_ndcg.assign(k_max, 0.0);
    std::size_t queries = 0;
    for (int fold = 0; fold < kFolds; ++fold) {
        result.skipped_empty += fold_eval[fold].skipped_empty;
        for (const PerQueryNdcg& row : fold_eval[fold].per_query) {
            ++queries;
            for (std::size_t k = 1; k <= k_max; ++k) {
                result.mean_ndcg[k - 1] += row.ndcg[k - 1];
                result.records.push_back(
                    {row.query_id, fold + 1, method, k, row.ndcg[k - 1]});
            }
        }
    }
    if (queries > 0) {
        for (double& v : result.mean_ndcg) v /= double(queries);
    }
    return result;
}

template CrossValidateResult cross_validate<data::FeatureGroup>(
    const std::vector<data::FeatureGroup>&, const data::FoldPlan&,
    const FoldTrainer<data::FeatureGroup>&, const std::string&, std::size_t, bool);
template CrossValidateResult cross_validate<data::TextGroup>(
    const std::vector<data::TextGroup>&, const data::FoldPlan&,
    const FoldTrainer<data::TextGroup>&, const std::string&, std::size_t, bool);

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string metric_table_tsv(const MetricTable& table) {
    std::size_t k_max = 0;
    for (const auto& [name, values] : table.rows) k_max = std::max(k_max, values.size());

    std::ostringstream os;
    os << "method";
    for (std::size_t k = 1; k <= k_max; ++k) os << "\tndcg@" << k;
    os << "\n";
    for (const auto& [name, values] : table.rows) {
        os << name;
        for (std::size_t k = 0; k < k_max; ++k) {
            os << "\t" << (k < values.size() ? format_double(values[k]) : "");
        }
        os << "\n";
    }
    return os.str();
}

std::string records_tsv(const std::vector<PerQueryRecord>& records) {
    std::ostringstream os;
    os << "query_id\tfold\tmethod\tk\tvalue\n";
    for (const PerQueryRecord& r : records) {
        os << r.query_id << "\t" << r.fold << "\t" << r.method << "\t" << r.k << "\t"
           << format_double(r.value) << "\n";
    }
    return os.str();
}

std::vector<PerQueryRecord> parse_records_tsv(std::istream& in) {
    std::vector<PerQueryRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line.rfind("query_id\t", 0) != 0) {
                throw std::runtime_error("records: missing header on line 1");
            }
            saw_header = true;
            continue;
        }
        std::istringstream fields(line);
        PerQueryRecord r;
        std::string token;
        if (!(fields >> r.query_id >> r.fold >> r.method >> r.k >> r.value)) {
            throw std::runtime_error("records: malformed line " + std::to_string(line_no));
        }
        if (fields >> token) {
            throw std::runtime_error("records: trailing fields on line " +
                                     std::to_string(line_no));
        }
        records.push_back(std::move(r));
    }
    if (!saw_header) {
        throw std::runtime_error("records: empty file");
    }
    return records;
}

namespace {

// Average ranks of |d| ascending; doubled so half-integer ranks stay exact.
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });

    std::vector<std::int64_t> rank2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        // positions i..j (0-based) share the average rank ((i+1) + (j+1)) / 2
        const std::int64_t two_avg = std::int64_t(i + j + 2);
        for (std::size_t t = i; t <= j; ++t) rank2[order[t]] = two_avg;
        i = j + 1;
    }
    return rank2;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_two_tailed(std::span<const double> x,
                                   std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("wilcoxon_two_tailed: sample sizes differ (" +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + ")");
    }
    std::vector<double> abs_d;
    std::vector<int> sign;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d == 0.0) continue;
        abs_d.push_back(std::fabs(d));
        sign.push_back(d > 0.0 ? 1 : -1);
    }
    const std::size_t n = abs_d.size();
    if (n == 0) {
        throw std::domain_error(
            "wilcoxon_two_tailed: all differences are zero, test undefined");
    }

    const std::vector<std::int64_t> rank2 = doubled_ranks(abs_d);
    std::int64_t w_plus2 = 0, total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (sign[i] > 0) w_plus2 += rank2[i];
    }
    const std::int64_t w_minus2 = total2 - w_plus2;
    const std::int64_t w_min2 = std::min(w_plus2, w_minus2);

    WilcoxonResult result;
    result.statistic = double(w_min2) / 2.0;
    result.n_effective = n;

    if (n <= 20) {
        // Exact null distribution of W+ over all 2^n sign assignments, as
        // subset-sum counts over the doubled ranks. Counts stay below 2^20,
        // far inside the double-exact integer range.
        std::vector<double> count(std::size_t(total2) + 1, 0.0);
        count[0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = std::size_t(rank2[i]);
            for (std::size_t s = std::size_t(total2); s >= r; --s) {
                count[s] += count[s - r];
            }
        }
        double at_most = 0.0;
        for (std::size_t s = 0; s <= std::size_t(w_min2); ++s) at_most += count[s];
        result.p_value = std::min(1.0, 2.0 * at_most / std::exp2(double(n)));
        return result;
    }

    // Normal approximation with tie and continuity corrections.
    const double nd = double(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double tie_term = 0.0;
    {
        std::vector<double> sorted(abs_d);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = double(j - i + 1);
            tie_term += (t * t * t - t);
            i = j + 1;
        }
    }
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double w = double(w_min2) / 2.0;
    const double z = (w - mean + 0.5) / std::sqrt(var);
    result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
    return result;
}

}  // namespace ltr::eval
