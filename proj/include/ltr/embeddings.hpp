#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltr/matrix.hpp"

namespace ltr::embeddings {

// Pretrained token -> vector map. Keys may be n-grams (words joined with
// '_'). Immutable after load; safe for concurrent reads.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> entries;
    std::size_t max_ngram = 1;  // longest key, in whitespace-separated words
    // One shared vector for every unknown word, drawn once at load time.
    std::vector<double> unk_vector;

    const std::vector<double>* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// Plain-text vector format: optional "count dim" header line, then one
// "key v1 ... vd" line per entry. The unknown-word vector is drawn from
// uniform(-0.25, 0.25)^dim using `seed`.
EmbeddingTable load_embeddings(const std::filesystem::path& path, std::uint64_t seed);
EmbeddingTable load_embeddings_text(const std::string& content, std::uint64_t seed);

// lowercase, split on whitespace, strip leading/trailing punctuation from
// each token, drop empties
std::vector<std::string> tokenize(std::string_view text);

// Greedy longest-match segmentation: scanning left to right, take the
// longest n-gram (up to table.max_ngram) present in the table; a word with
// no match of any length is emitted as-is and later maps to unk_vector.
std::vector<std::string> segment_greedy(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& table);

struct SentenceMatrix {
    Matrix matrix;               // trunc_len x dim
    std::size_t valid_rows = 0;  // rows at index >= valid_rows are zero padding
};

// tokenize -> segment_greedy -> lookup (unknown -> unk_vector), truncated
// or zero-padded to exactly trunc_len rows.
SentenceMatrix to_sentence_matrix(std::string_view text, const EmbeddingTable& table,
                                  std::size_t trunc_len = 100);

}  // namespace ltr::embeddings
