#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "ltr/embeddings.hpp"
#include "temp_files.hpp"

using namespace ltr;
using ltr::testing::TempDir;

namespace {

const std::string kSmallTable =
    "hello 1 0 0\n"
    "world 0 1 0\n"
    "hello_world 0.5 0.5 0\n"
    "peace 0 0 1\n";

}  // namespace

TEST_CASE("load_embeddings_text without header") {
    const auto table = embeddings::load_embeddings_text(kSmallTable, 0);
    CHECK(table.dim == 3);
    CHECK(table.entries.size() == 4);
    CHECK(table.max_ngram == 2);
    REQUIRE(table.find("hello_world") != nullptr);
    CHECK((*table.find("hello_world"))[0] == 0.5);
    CHECK(table.find("absent") == nullptr);
}

TEST_CASE("load_embeddings_text with count/dim header") {
    const auto table = embeddings::load_embeddings_text("4 3\n" + kSmallTable, 0);
    CHECK(table.dim == 3);
    CHECK(table.entries.size() == 4);

    // header only recognized on the first content line
    const auto no_header = embeddings::load_embeddings_text("7 1 2\n", 0);
    CHECK(no_header.dim == 2);
    REQUIRE(no_header.find("7") != nullptr);

    CHECK_THROWS_WITH_AS(embeddings::load_embeddings_text("4 2\n" + kSmallTable, 0),
                         doctest::Contains("header dimension"), std::runtime_error);
}

TEST_CASE("load_embeddings_text error paths") {
    CHECK_THROWS_WITH_AS(
        embeddings::load_embeddings_text("a 1 2\nb 1 2 3\n", 0),
        doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(embeddings::load_embeddings_text("a 1 2\nb 1 x\n", 0),
                         doctest::Contains("malformed"), std::runtime_error);
    CHECK_THROWS_AS(embeddings::load_embeddings_text("", 0), std::runtime_error);
    CHECK_THROWS_AS(embeddings::load_embeddings_text("word\n", 0), std::runtime_error);
}

TEST_CASE("unknown-word vector is deterministic under the seed") {
    const auto a = embeddings::load_embeddings_text(kSmallTable, 42);
    const auto b = embeddings::load_embeddings_text(kSmallTable, 42);
    const auto c = embeddings::load_embeddings_text(kSmallTable, 43);
    CHECK(a.unk_vector == b.unk_vector);
    CHECK(a.unk_vector != c.unk_vector);
    for (double v : a.unk_vector) {
        CHECK(v >= -0.25);
        CHECK(v < 0.25);
    }
}

TEST_CASE("load_embeddings reads from a file") {
    TempDir dir;
    const auto path = dir.file("vec.txt", kSmallTable);
    const auto table = embeddings::load_embeddings(path, 0);
    CHECK(table.entries.size() == 4);
    CHECK_THROWS_AS(embeddings::load_embeddings(dir.path / "missing.txt", 0),
                    std::runtime_error);
}

TEST_CASE("tokenize lowercases, splits and strips punctuation") {
    CHECK(embeddings::tokenize("Hello, World!") ==
          std::vector<std::string>{"hello", "world"});
    CHECK(embeddings::tokenize("  (heart-attack).  ") ==
          std::vector<std::string>{"heart-attack"});  // inner punctuation kept
    CHECK(embeddings::tokenize("a\tb\nc") == std::vector<std::string>{"a", "b", "c"});
    CHECK(embeddings::tokenize("...").empty());
    CHECK(embeddings::tokenize("").empty());
}

TEST_CASE("segment_greedy prefers the longest known n-gram") {
    const auto table = embeddings::load_embeddings_text(kSmallTable, 0);
    CHECK(embeddings::segment_greedy({"hello", "world", "peace"}, table) ==
          std::vector<std::string>{"hello_world", "peace"});
    CHECK(embeddings::segment_greedy({"world", "hello"}, table) ==
          std::vector<std::string>{"world", "hello"});
    // unmatched words pass through for the unk lookup
    CHECK(embeddings::segment_greedy({"hello", "there", "world"}, table) ==
          std::vector<std::string>{"hello", "there", "world"});
    CHECK(embeddings::segment_greedy({}, table).empty());
}

TEST_CASE("to_sentence_matrix pads, truncates and substitutes the unk vector") {
    const auto table = embeddings::load_embeddings_text(kSmallTable, 7);

    SUBCASE("padding beyond the token count is zero") {
        const auto sm = embeddings::to_sentence_matrix("peace", table, 4);
        CHECK(sm.valid_rows == 1);
        CHECK(sm.matrix.rows() == 4);
        CHECK(sm.matrix.cols() == 3);
        CHECK(sm.matrix(0, 2) == 1.0);
        for (std::size_t r = 1; r < 4; ++r) {
            for (std::size_t c = 0; c < 3; ++c) CHECK(sm.matrix(r, c) == 0.0);
        }
    }

    SUBCASE("n-gram merge shortens the row count") {
        const auto sm = embeddings::to_sentence_matrix("Hello world peace", table, 10);
        CHECK(sm.valid_rows == 2);  // hello_world + peace
        CHECK(sm.matrix(0, 0) == 0.5);
        CHECK(sm.matrix(1, 2) == 1.0);
    }

    SUBCASE("truncation keeps the first trunc_len keys") {
        const auto sm = embeddings::to_sentence_matrix("peace hello world", table, 1);
        CHECK(sm.valid_rows == 1);
        CHECK(sm.matrix.rows() == 1);
        CHECK(sm.matrix(0, 2) == 1.0);  // peace
    }

    SUBCASE("unknown words share the table's unk vector") {
        const auto sm = embeddings::to_sentence_matrix("qwerty zzz", table, 3);
        CHECK(sm.valid_rows == 2);
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(sm.matrix(0, c) == table.unk_vector[c]);
            CHECK(sm.matrix(1, c) == table.unk_vector[c]);
        }
    }

    SUBCASE("trunc_len must be positive") {
        CHECK_THROWS_AS(embeddings::to_sentence_matrix("x", table, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("toy embeddings file loads with the documented shape") {
    const auto table = embeddings::load_embeddings("data/toy/embeddings.txt", 0);
    CHECK(table.dim == 8);
    CHECK(table.entries.size() == 23);
    CHECK(table.max_ngram == 2);  // heart_attack
    const auto keys =
        embeddings::segment_greedy(embeddings::tokenize("Heart attack treatment"), table);
    CHECK(keys == std::vector<std::string>{"heart_attack", "treatment"});
}
