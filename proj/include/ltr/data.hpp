#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltr::data {

// Relevance grades: non-relevant (n) = 0, partially relevant (p) = 1,
// definitely relevant (d) = 2.
constexpr int kGradeNonRelevant = 0;
constexpr int kGradePartiallyRelevant = 1;
constexpr int kGradeDefinitelyRelevant = 2;

bool valid_grade(int grade);

// One collapsed human judgment; when the same (query, doc) pair is judged
// several times the highest grade is kept.
struct Judgment {
    int query_id;
    std::string doc_id;
    int grade;
};

struct FeatureDoc {
    std::string doc_id;
    std::vector<double> features;
    int grade;
};

struct TextDoc {
    std::string doc_id;
    std::string text;
    int grade;
};

// One query's judged candidate documents, feature mode.
struct FeatureGroup {
    int query_id;
    std::vector<FeatureDoc> docs;
};

// One query's judged candidate documents, raw-text mode.
struct TextGroup {
    int query_id;
    std::string query_text;
    std::vector<TextDoc> docs;
};

struct DocCorpus {
    std::unordered_map<std::string, std::string> text_by_id;
    std::size_t skipped_records = 0;    // records with no .U identifier
    std::size_t duplicate_records = 0;  // repeated .U; last record wins
};

// Parses MEDLINE-style tagged records (".I seq", ".U doc_id", ".T title",
// ".W abstract"; tag content on the following line). Document text is
// title + " " + abstract, keyed by the .U identifier.
DocCorpus parse_ohsumed_docs(const std::filesystem::path& path);

// Parses whitespace-separated judgment lines "query_id doc_id grade" where
// grade is one of n/p/d (or 0/1/2). Duplicate (query, doc) pairs collapse
// to the maximum grade, preserving first-seen order.
std::vector<Judgment> parse_judgments(const std::filesystem::path& path);

// Parses LETOR-style feature lines "rel qid:Q 1:v1 2:v2 ... #comment".
// Feature indices are 1-based and must be strictly increasing within a
// line; missing indices are zero-filled up to the maximum index seen in
// the file. Groups are keyed by qid in first-seen order; interleaved qids
// are accepted.
std::vector<FeatureGroup> parse_letor(const std::filesystem::path& path);
std::vector<FeatureGroup> parse_letor_text(const std::string& content);

std::string serialize_letor(const std::vector<FeatureGroup>& groups);

// Joins parsed queries, documents and judgments into per-query groups.
// Queries use the same tagged format as documents (query text keyed by the
// query id). Only judged documents enter groups; queries with no judged
// document or no text are dropped.
std::vector<TextGroup> assemble_text_groups(
        const std::unordered_map<std::string, std::string>& query_text_by_id,
        const std::unordered_map<std::string, std::string>& doc_text_by_id,
        const std::vector<Judgment>& judgments);

// The fixed 5-fold partition of query ids.
struct FoldPlan {
    // inclusive [lo, hi] query-id ranges, folds S1..S5
    std::array<std::pair<int, int>, 5> ranges;

    static FoldPlan ohsumed() {
        return {{{{1, 21}, {22, 42}, {43, 63}, {64, 84}, {85, 106}}}};
    }

    // 1-based fold index containing query_id, or 0 if outside every range.
    int fold_of(int query_id) const;
};

template <class Group>
struct FoldSplit {
    std::vector<Group> train;
    std::vector<Group> validation;
    std::vector<Group> test;
};

// test = S_k, validation = S_{k mod 5 + 1}, train = the remaining three
// folds. fold_k is 1-based. Throws if fold_k is out of range or any group's
// query id falls outside the plan.
template <class Group>
FoldSplit<Group> make_folds(const std::vector<Group>& groups, const FoldPlan& plan,
                            int fold_k);

// Per-query, per-feature min-max scaling to [0,1]; features constant within
// a query map to 0.
void min_max_normalize(std::vector<FeatureGroup>& groups);

}  // namespace ltr::data
