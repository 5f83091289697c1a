#include "ltr/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ltr/rng.hpp"

namespace ltr::embeddings {

namespace {

bool parse_count_dim_header(const std::string& line, std::size_t& count,
                            std::size_t& dim) {
    std::istringstream ss(line);
    long long a = 0, b = 0;
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra) || a < 0 || b <= 0) return false;
    count = static_cast<std::size_t>(a);
    dim = static_cast<std::size_t>(b);
    return true;
}

}  // namespace

EmbeddingTable load_embeddings_text(const std::string& content, std::uint64_t seed) {
    EmbeddingTable table;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    std::size_t header_dim = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        if (first_content_line) {
            first_content_line = false;
            std::size_t count = 0, dim = 0;
            if (parse_count_dim_header(line, count, dim)) {
                header_dim = dim;
                continue;
            }
        }

        std::istringstream ss(line);
        std::string key;
        ss >> key;
        std::vector<double> vec;
        double v;
        while (ss >> v) vec.push_back(v);
        if (!ss.eof()) {
            throw std::runtime_error("load_embeddings: malformed value at line " +
                                     std::to_string(line_no));
        }
        if (vec.empty()) {
            throw std::runtime_error("load_embeddings: entry with no values at line " +
                                     std::to_string(line_no));
        }
        if (table.dim == 0) {
            table.dim = vec.size();
            if (header_dim != 0 && header_dim != table.dim) {
                throw std::runtime_error(
                        "load_embeddings: header dimension " + std::to_string(header_dim) +
                        " does not match entry dimension " + std::to_string(table.dim));
            }
        } else if (vec.size() != table.dim) {
            throw std::runtime_error(
                    "load_embeddings: ragged vector length " + std::to_string(vec.size()) +
                    " (expected " + std::to_string(table.dim) + ") at line " +
                    std::to_string(line_no));
        }
        const std::size_t words = 1 + std::count(key.begin(), key.end(), '_');
        table.max_ngram = std::max(table.max_ngram, words);
        table.entries[key] = std::move(vec);
    }

    if (table.entries.empty()) {
        throw std::runtime_error("load_embeddings: no entries found");
    }

    Rng rng(seed);
    table.unk_vector.resize(table.dim);
    for (auto& x : table.unk_vector) x = rng.uniform(-0.25, 0.25);
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::uint64_t seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_embeddings_text(ss.str(), seed);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        // strip leading/trailing punctuation
        std::size_t b = 0, e = current.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(current[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(current[e - 1]))) --e;
        if (e > b) tokens.push_back(current.substr(b, e - b));
        current.clear();
    };
    for (const char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            current.push_back(static_cast<char>(
                    std::tolower(static_cast<unsigned char>(c))));
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> segment_greedy(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& table) {
    std::vector<std::string> keys;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const std::size_t longest = std::min(table.max_ngram, tokens.size() - i);
        bool matched = false;
        for (std::size_t n = longest; n >= 1; --n) {
            std::string key = tokens[i];
            for (std::size_t k = 1; k < n; ++k) key += "_" + tokens[i + k];
            if (table.entries.count(key)) {
                keys.push_back(std::move(key));
                i += n;
                matched = true;
                break;
            }
        }
        if (!matched) {
            keys.push_back(tokens[i]);  // unknown word
            ++i;
        }
    }
    return keys;
}

SentenceMatrix to_sentence_matrix(std::string_view text, const EmbeddingTable& table,
                                  std::size_t trunc_len) {
    if (trunc_len < 1) {
        throw std::invalid_argument("to_sentence_matrix: trunc_len must be >= 1");
    }
    const auto keys = segment_greedy(tokenize(text), table);
    SentenceMatrix sm;
    sm.matrix = Matrix(trunc_len, table.dim);
    sm.valid_rows = std::min(keys.size(), trunc_len);
    for (std::size_t r = 0; r < sm.valid_rows; ++r) {
        const std::vector<double>* vec = table.find(keys[r]);
        if (!vec) vec = &table.unk_vector;
        std::copy(vec->begin(), vec->end(), sm.matrix.row_ptr(r));
    }
    return sm;
}

}  // namespace ltr::embeddings
