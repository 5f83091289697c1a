#include "ltr/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltr::data {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) {
            if (start < content.size()) lines.push_back(content.substr(start));
            break;
        }
        std::string line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

bool is_tag_line(const std::string& line) {
    return line.size() >= 2 && line[0] == '.' &&
           std::isupper(static_cast<unsigned char>(line[1]));
}

int parse_grade_token(const std::string& tok, std::size_t line_no) {
    if (tok.size() == 1) {
        switch (std::tolower(static_cast<unsigned char>(tok[0]))) {
            case 'n': case '0': return kGradeNonRelevant;
            case 'p': case '1': return kGradePartiallyRelevant;
            case 'd': case '2': return kGradeDefinitelyRelevant;
            default: break;
        }
    }
    throw std::runtime_error("parse_judgments: unknown grade token '" + tok +
                             "' at line " + std::to_string(line_no));
}

}  // namespace

bool valid_grade(int grade) {
    return grade >= kGradeNonRelevant && grade <= kGradeDefinitelyRelevant;
}

DocCorpus parse_ohsumed_docs(const std::filesystem::path& path) {
    const auto lines = split_lines(read_file(path));
    DocCorpus corpus;

    struct Record {
        bool active = false;
        std::string id, title, abstract_;
        bool saw_u = false;
    } rec;

    auto flush = [&](std::size_t line_no) {
        if (!rec.active) return;
        if (!rec.saw_u) {
            ++corpus.skipped_records;
        } else if (rec.id.empty()) {
            throw std::runtime_error("parse_ohsumed_docs: truncated record (.U with no "
                                     "identifier) ending at line " +
                                     std::to_string(line_no));
        } else {
            std::string text = rec.title;
            if (!text.empty() && !rec.abstract_.empty()) text += " ";
            text += rec.abstract_;
            if (corpus.text_by_id.count(rec.id)) ++corpus.duplicate_records;
            corpus.text_by_id[rec.id] = std::move(text);  // last record wins
        }
        rec = Record{};
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        if (line.rfind(".I", 0) == 0 && (line.size() == 2 || line[2] == ' ')) {
            flush(i);
            rec.active = true;
            ++i;
            continue;
        }
        if (!rec.active) {  // content before any .I record
            ++i;
            continue;
        }
        if (is_tag_line(line)) {
            const char tag = line[1];
            // content on the following lines, up to the next tag line
            std::string content;
            ++i;
            while (i < lines.size() && !is_tag_line(lines[i])) {
                if (!content.empty()) content += " ";
                content += trim(lines[i]);
                ++i;
            }
            content = trim(content);
            switch (tag) {
                case 'U':
                    rec.saw_u = true;
                    rec.id = content;
                    break;
                case 'T': rec.title = content; break;
                case 'W': rec.abstract_ = content; break;
                default: break;  // .S/.M/.P/.A and friends are ignored
            }
            continue;
        }
        ++i;
    }
    flush(lines.size());
    return corpus;
}

std::vector<Judgment> parse_judgments(const std::filesystem::path& path) {
    const auto lines = split_lines(read_file(path));
    std::vector<Judgment> judgments;
    std::map<std::pair<int, std::string>, std::size_t> seen;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_ws(lines[i]);
        if (fields.empty()) continue;
        if (fields.size() != 3) {
            throw std::runtime_error("parse_judgments: expected 'query_id doc_id "
                                     "grade' at line " +
                                     std::to_string(i + 1));
        }
        int qid = 0;
        const auto [p, ec] =
                std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), qid);
        if (ec != std::errc() || p != fields[0].data() + fields[0].size()) {
            throw std::runtime_error("parse_judgments: bad query id '" + fields[0] +
                                     "' at line " + std::to_string(i + 1));
        }
        const int grade = parse_grade_token(fields[2], i + 1);

        const auto key = std::make_pair(qid, fields[1]);
        if (auto it = seen.find(key); it != seen.end()) {
            // multiple assessors: the highest relevance label is taken
            judgments[it->second].grade = std::max(judgments[it->second].grade, grade);
        } else {
            seen.emplace(key, judgments.size());
            judgments.push_back({qid, fields[1], grade});
        }
    }
    return judgments;
}

std::vector<FeatureGroup> parse_letor_text(const std::string& content) {
    const auto lines = split_lines(content);
    std::vector<FeatureGroup> groups;
    std::unordered_map<int, std::size_t> group_index;
    std::size_t max_feature = 0;
    std::size_t anonymous = 0;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        std::string comment;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            comment = trim(line.substr(hash + 1));
            line = line.substr(0, hash);
        }
        const auto fields = split_ws(line);
        if (fields.empty()) continue;

        const auto line_err = [&](const std::string& what) {
            return std::runtime_error("parse_letor: " + what + " at line " +
                                      std::to_string(i + 1));
        };

        int rel = -1;
        auto [pr, ecr] =
                std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), rel);
        if (ecr != std::errc() || !valid_grade(rel)) {
            throw line_err("relevance label '" + fields[0] + "' outside {0,1,2}");
        }
        if (fields.size() < 2 || fields[1].rfind("qid:", 0) != 0) {
            throw line_err("missing qid field");
        }
        int qid = 0;
        const std::string qid_str = fields[1].substr(4);
        auto [pq, ecq] =
                std::from_chars(qid_str.data(), qid_str.data() + qid_str.size(), qid);
        if (ecq != std::errc()) throw line_err("bad qid '" + fields[1] + "'");

        std::vector<std::pair<std::size_t, double>> feats;
        std::size_t prev_index = 0;
        for (std::size_t f = 2; f < fields.size(); ++f) {
            const auto colon = fields[f].find(':');
            if (colon == std::string::npos) {
                throw line_err("malformed feature '" + fields[f] + "'");
            }
            std::size_t idx = 0;
            const std::string idx_str = fields[f].substr(0, colon);
            auto [pi, eci] =
                    std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
            if (eci != std::errc() || idx == 0) {
                throw line_err("bad feature index '" + fields[f] + "'");
            }
            if (idx <= prev_index) {
                throw line_err("non-monotone feature index " + std::to_string(idx));
            }
            prev_index = idx;
            double value = 0.0;
            try {
                value = std::stod(fields[f].substr(colon + 1));
            } catch (const std::exception&) {
                throw line_err("bad feature value '" + fields[f] + "'");
            }
            feats.emplace_back(idx, value);
            max_feature = std::max(max_feature, idx);
        }

        std::string doc_id;
        if (!comment.empty()) {
            // accept "docid = X", "docid=X", "doc=X" or a bare token
            auto tokens = split_ws(comment);
            for (std::size_t t = 0; t < tokens.size(); ++t) {
                if (tokens[t] == "docid" || tokens[t] == "doc") {
                    if (t + 2 < tokens.size() && tokens[t + 1] == "=") {
                        doc_id = tokens[t + 2];
                    }
                    break;
                }
                if (tokens[t].rfind("docid=", 0) == 0) { doc_id = tokens[t].substr(6); break; }
                if (tokens[t].rfind("doc=", 0) == 0) { doc_id = tokens[t].substr(4); break; }
            }
            if (doc_id.empty()) doc_id = tokens.empty() ? "" : tokens[0];
        }
        if (doc_id.empty()) doc_id = "line" + std::to_string(++anonymous);

        auto it = group_index.find(qid);
        if (it == group_index.end()) {
            it = group_index.emplace(qid, groups.size()).first;
            groups.push_back({qid, {}});
        }
        FeatureDoc doc;
        doc.doc_id = std::move(doc_id);
        doc.grade = rel;
        for (const auto& [idx, value] : feats) {
            if (doc.features.size() < idx) doc.features.resize(idx, 0.0);
            doc.features[idx - 1] = value;
        }
        groups[it->second].docs.push_back(std::move(doc));
    }

    for (auto& g : groups) {
        for (auto& doc : g.docs) doc.features.resize(max_feature, 0.0);
    }
    return groups;
}

std::vector<FeatureGroup> parse_letor(const std::filesystem::path& path) {
    return parse_letor_text(read_file(path));
}

std::string serialize_letor(const std::vector<FeatureGroup>& groups) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& g : groups) {
        for (const auto& doc : g.docs) {
            out << doc.grade << " qid:" << g.query_id;
            for (std::size_t i = 0; i < doc.features.size(); ++i) {
                out << " " << (i + 1) << ":" << doc.features[i];
            }
            out << " #docid = " << doc.doc_id << "\n";
        }
    }
    return out.str();
}

std::vector<TextGroup> assemble_text_groups(
        const std::unordered_map<std::string, std::string>& query_text_by_id,
        const std::unordered_map<std::string, std::string>& doc_text_by_id,
        const std::vector<Judgment>& judgments) {
    std::vector<TextGroup> groups;
    std::unordered_map<int, std::size_t> group_index;
    for (const auto& j : judgments) {
        const auto qit = query_text_by_id.find(std::to_string(j.query_id));
        if (qit == query_text_by_id.end()) continue;
        const auto dit = doc_text_by_id.find(j.doc_id);
        if (dit == doc_text_by_id.end()) continue;
        auto it = group_index.find(j.query_id);
        if (it == group_index.end()) {
            it = group_index.emplace(j.query_id, groups.size()).first;
            groups.push_back({j.query_id, qit->second, {}});
        }
        groups[it->second].docs.push_back({j.doc_id, dit->second, j.grade});
    }
    return groups;
}

int FoldPlan::fold_of(int query_id) const {
    for (std::size_t k = 0; k < ranges.size(); ++k) {
        if (query_id >= ranges[k].first && query_id <= ranges[k].second) {
            return static_cast<int>(k) + 1;
        }
    }
    return 0;
}

template <class Group>
FoldSplit<Group> make_folds(const std::vector<Group>& groups, const FoldPlan& plan,
                            int fold_k) {
    if (fold_k < 1 || fold_k > 5) {
        throw std::invalid_argument("make_folds: fold must be in 1..5, got " +
                                    std::to_string(fold_k));
    }
    const int test_fold = fold_k;
    const int val_fold = fold_k % 5 + 1;
    FoldSplit<Group> split;
    for (const auto& g : groups) {
        const int f = plan.fold_of(g.query_id);
        if (f == 0) {
            throw std::runtime_error("make_folds: query id " +
                                     std::to_string(g.query_id) +
                                     " outside the fold plan");
        }
        if (f == test_fold) {
            split.test.push_back(g);
        } else if (f == val_fold) {
            split.validation.push_back(g);
        } else {
            split.train.push_back(g);
        }
    }
    return split;
}

template FoldSplit<FeatureGroup> make_folds(const std::vector<FeatureGroup>&,
                                            const FoldPlan&, int);
template FoldSplit<TextGroup> make_folds(const std::vector<TextGroup>&,
                                         const FoldPlan&, int);

void min_max_normalize(std::vector<FeatureGroup>& groups) {
    for (auto& g : groups) {
        if (g.docs.empty()) continue;
        const std::size_t dim = g.docs[0].features.size();
        for (std::size_t f = 0; f < dim; ++f) {
            double lo = g.docs[0].features[f], hi = lo;
            for (const auto& doc : g.docs) {
                lo = std::min(lo, doc.features[f]);
                hi = std::max(hi, doc.features[f]);
            }
            const double range = hi - lo;
            for (auto& doc : g.docs) {
                doc.features[f] = range == 0.0 ? 0.0 : (doc.features[f] - lo) / range;
            }
        }
    }
}

}  // namespace ltr::data
