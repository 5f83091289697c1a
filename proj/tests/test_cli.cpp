#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ltr/cli.hpp"
#include "ltr/data.hpp"
#include "ltr/eval.hpp"
#include "ltr/kernels.hpp"
#include "ltr/model_io.hpp"
#include "temp_files.hpp"

using namespace ltr;
using testing::TempDir;
using testing::slurp;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI in process with stdout/stderr captured; streams are restored
// before any assertion can fire.
CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult result;
    try {
        result.code = cli::run(std::move(args));
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

const char* kToyLetor = "data/toy/features.letor";
const char* kToyDocs = "data/toy/docs.txt";
const char* kToyQueries = "data/toy/queries.txt";
const char* kToyJudgments = "data/toy/judgments.txt";
const char* kToyEmbeddings = "data/toy/embeddings.txt";

std::string train_toy_conv_model(const TempDir& dir, const std::string& name) {
    const std::string model = (dir.path / name).string();
    const auto r = run_cli({"train", "--mode", "convranknet", "--docs", kToyDocs,
                            "--queries", kToyQueries, "--judgments", kToyJudgments,
                            "--embeddings", kToyEmbeddings, "--trunc-len", "8",
                            "--filters", "2x2,3x2", "--hidden", "4", "--dropout", "0",
                            "--epochs", "3", "--lr", "0.01", "--batch", "8", "--seed",
                            "1", "--model-out", model});
    REQUIRE(r.code == 0);
    return model;
}

}  // namespace

TEST_CASE("cli: help and argument errors") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"frobnicate"}).code != 0);
    CHECK(run_cli({"train"}).code != 0);  // --model-out is required
    CHECK(run_cli({"verify", "--n-max", "0"}).code != 0);

    const auto bad_kernels = run_cli({"--kernels", "quantum", "verify", "--n-max", "2",
                                      "--seeds", "1"});
    CHECK(bad_kernels.code == 1);
    CHECK(bad_kernels.err.find("unavailable") != std::string::npos);
}

TEST_CASE("cli: train on the toy feature dataset learns and is reproducible") {
    TempDir dir;
    const std::string model = (dir.path / "m.ltr").string();
    const std::vector<std::string> args{
        "train",   "--mode",      "ranknet-features",
        "--letor", kToyLetor,     "--normalize",
        "--epochs", "40",         "--lr",
        "0.1",     "--batch",     "8",
        "--seed",  "7",           "--model-out",
        model};
    const auto r = run_cli(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("trained ranknet-features") != std::string::npos);
    CHECK(std::filesystem::exists(model));
    CHECK(model_io::peek_mode(model) == model_io::kModeRankNetFeatures);

    const std::string loss_csv = slurp(model + ".loss.csv");
    CHECK(loss_csv.rfind("epoch,mean_loss\n", 0) == 0);
    CHECK(count_lines(loss_csv) == 41);  // header + one row per epoch
    // the planted feature signal must be picked up
    std::istringstream rows(loss_csv);
    std::string line, first, last;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) {
        if (first.empty()) first = line;
        last = line;
    }
    const double first_loss = std::stod(first.substr(first.find(',') + 1));
    const double last_loss = std::stod(last.substr(last.find(',') + 1));
    CHECK(last_loss < first_loss);

    const std::string again = (dir.path / "m2.ltr").string();
    auto args2 = args;
    args2.back() = again;
    CHECK(run_cli(args2).code == 0);
    CHECK(slurp(model) == slurp(again));
}

TEST_CASE("cli: train with zero epochs saves the untouched initialization") {
    TempDir dir;
    const std::string model = (dir.path / "init.ltr").string();
    const auto r = run_cli({"train", "--letor", kToyLetor, "--epochs", "0",
                            "--model-out", model});
    CHECK(r.code == 0);
    CHECK(model_io::load_ranknet(model).config.hidden == 10);
    CHECK(count_lines(slurp(model + ".loss.csv")) == 1);  // header only
}

TEST_CASE("cli: train reports missing dataset flags") {
    TempDir dir;
    const std::string model = (dir.path / "x.ltr").string();
    const auto r = run_cli({"train", "--model-out", model});
    CHECK(r.code == 1);
    CHECK(r.err.find("--letor") != std::string::npos);

    const auto conv = run_cli({"train", "--mode", "convranknet", "--docs", kToyDocs,
                               "--queries", kToyQueries, "--judgments", kToyJudgments,
                               "--model-out", model});
    CHECK(conv.code == 1);
    CHECK(conv.err.find("--embeddings") != std::string::npos);
}

TEST_CASE("cli: oracle evaluation scores perfectly on the toy dataset") {
    TempDir dir;
    const std::string records = (dir.path / "records.tsv").string();
    const std::string metrics = (dir.path / "metrics.tsv").string();
    const auto r = run_cli({"evaluate", "--letor", kToyLetor, "--oracle", "--k-max",
                            "3", "--records-out", records, "--metrics-out", metrics});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("method\tndcg@1\tndcg@2\tndcg@3\n", 0) == 0);
    CHECK(r.out.find("oracle\t1\t1\t1\n") != std::string::npos);
    CHECK(slurp(metrics) == r.out);

    std::istringstream in(slurp(records));
    const auto parsed = eval::parse_records_tsv(in);
    CHECK(parsed.size() == 4 * 3);  // 4 toy queries x k_max
    for (const auto& rec : parsed) {
        CHECK(rec.value == 1.0);
        CHECK(rec.method == "oracle");
    }
}

TEST_CASE("cli: evaluating a saved model is deterministic") {
    TempDir dir;
    const std::string model = (dir.path / "m.ltr").string();
    REQUIRE(run_cli({"train", "--letor", kToyLetor, "--normalize", "--epochs", "25",
                     "--lr", "0.1", "--batch", "8", "--seed", "3", "--model-out",
                     model}).code == 0);

    const std::vector<std::string> args{"evaluate", "--letor", kToyLetor,
                                        "--normalize", "--model", model,
                                        "--k-max", "5"};
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("ranknet-features\t") != std::string::npos);
}

TEST_CASE("cli: evaluate rejects ambiguous or mismatched sources") {
    TempDir dir;
    const auto both = run_cli({"evaluate", "--letor", kToyLetor, "--oracle", "--cv"});
    CHECK(both.code == 1);
    CHECK(both.err.find("exactly one") != std::string::npos);

    const std::string model = (dir.path / "m.ltr").string();
    REQUIRE(run_cli({"train", "--letor", kToyLetor, "--epochs", "0", "--model-out",
                     model}).code == 0);
    const auto mismatch = run_cli({"evaluate", "--mode", "convranknet", "--model", model,
                                   "--docs", kToyDocs, "--queries", kToyQueries,
                                   "--judgments", kToyJudgments, "--embeddings",
                                   kToyEmbeddings});
    CHECK(mismatch.code == 1);
    CHECK(mismatch.err.find("is ranknet-features but --mode is convranknet") !=
          std::string::npos);
}

TEST_CASE("cli: text-mode training and ranking count one encoder pass per document") {
    TempDir dir;
    const std::string model = train_toy_conv_model(dir, "conv.ltr");
    CHECK(model_io::peek_mode(model) == model_io::kModeConvRankNet);

    const auto docs = dir.file("rank_docs.txt",
                               "docA\tsweet red apple fruit\n"
                               "heart attack treatment\n"
                               "docC\tsweet red apple fruit\n");
    const auto r = run_cli({"rank", "--model", model, "--embeddings", kToyEmbeddings,
                            "--trunc-len", "8", "--query", "sweet red fruit", "--docs",
                            docs.string()});
    CHECK(r.code == 0);
    REQUIRE(count_lines(r.out) == 4);  // 3 documents + the passes line
    CHECK(r.out.find("# encoder passes: query=1 documents=3\n") != std::string::npos);

    // docA and docC share text, so they tie and keep input order; the bare
    // line is named by its 1-based position
    const auto pos_a = r.out.find("docA\t");
    const auto pos_c = r.out.find("docC\t");
    REQUIRE(pos_a != std::string::npos);
    REQUIRE(pos_c != std::string::npos);
    CHECK(pos_a < pos_c);
    CHECK(r.out.find("2\t") != std::string::npos);

    // scores print in descending order
    std::istringstream lines(r.out);
    std::string line;
    double prev = 0.0;
    bool have_prev = false;
    while (std::getline(lines, line)) {
        if (line.rfind("#", 0) == 0) break;
        const double s = std::stod(line.substr(line.find('\t') + 1));
        if (have_prev) CHECK(prev >= s);
        prev = s;
        have_prev = true;
    }
}

TEST_CASE("cli: rank rejects a feature-mode model") {
    TempDir dir;
    const std::string model = (dir.path / "m.ltr").string();
    REQUIRE(run_cli({"train", "--letor", kToyLetor, "--epochs", "0", "--model-out",
                     model}).code == 0);
    const auto docs = dir.file("d.txt", "one doc\n");
    const auto r = run_cli({"rank", "--model", model, "--query", "q", "--docs",
                            docs.string(), "--embeddings", kToyEmbeddings});
    CHECK(r.code == 1);
    CHECK(r.err.find("text-mode model") != std::string::npos);
}

namespace {

std::string records_file(const TempDir& dir, const std::string& name,
                         const std::vector<double>& values) {
    std::vector<eval::PerQueryRecord> records;
    for (std::size_t i = 0; i < values.size(); ++i) {
        records.push_back({int(i + 1), 1, "m", 10, values[i]});
        records.push_back({int(i + 1), 1, "m", 1, 0.0});  // other k, ignored
    }
    return dir.file(name, eval::records_tsv(records)).string();
}

}  // namespace

TEST_CASE("cli: significance reproduces the constant-shift p-value") {
    TempDir dir;
    std::vector<double> base(10), shifted(10);
    for (std::size_t i = 0; i < base.size(); ++i) {
        base[i] = 0.02 * double(i);
        shifted[i] = base[i] + 0.5;
    }
    const std::string a = records_file(dir, "a.tsv", shifted);
    const std::string b = records_file(dir, "b.tsv", base);
    const auto r = run_cli({"significance", "--a", a, "--b", b, "--k", "10"});
    CHECK(r.code == 0);
    CHECK(r.out == "W=0 p=0.001953125 n=10\n");
}

TEST_CASE("cli: significance diagnoses degenerate and unpaired inputs") {
    TempDir dir;
    const std::vector<double> values{0.1, 0.2, 0.3};
    const std::string a = records_file(dir, "a.tsv", values);
    const auto same = run_cli({"significance", "--a", a, "--b", a});
    CHECK(same.code == 1);
    CHECK(same.err.find("all differences are zero") != std::string::npos);

    const std::string wider = records_file(dir, "b.tsv", {0.1, 0.2, 0.3, 0.4, 0.5});
    const auto unpaired = run_cli({"significance", "--a", a, "--b", wider});
    CHECK(unpaired.code == 1);
    CHECK(unpaired.err.find("unpaired queries: 4, 5") != std::string::npos);

    const std::string dup = dir.file("dup.tsv",
                                     "query_id\tfold\tmethod\tk\tvalue\n"
                                     "1\t1\tm\t10\t0.5\n"
                                     "1\t1\tm\t10\t0.6\n")
                                .string();
    const auto duplicated = run_cli({"significance", "--a", dup, "--b", a});
    CHECK(duplicated.code == 1);
    CHECK(duplicated.err.find("duplicate record for query 1") != std::string::npos);

    const auto missing_k = run_cli({"significance", "--a", a, "--b", a, "--k", "7"});
    CHECK(missing_k.code == 1);
    CHECK(missing_k.err.find("no records at k=7") != std::string::npos);
}

TEST_CASE("cli: verify agrees with sorting for every size and psi") {
    const auto identity = run_cli({"verify", "--n-max", "4", "--seeds", "10"});
    CHECK(identity.code == 0);
    CHECK(identity.out.find("n=1 seeds=10 ok\n") != std::string::npos);
    CHECK(identity.out.find("n=4 seeds=10 ok\n") != std::string::npos);
    CHECK(identity.out.find("in 40/40 cases") != std::string::npos);

    const auto cube = run_cli({"verify", "--n-max", "3", "--seeds", "5", "--psi",
                               "cube", "--seed", "11"});
    CHECK(cube.code == 0);
    CHECK(cube.out.find("in 15/15 cases") != std::string::npos);

    const auto bogus = run_cli({"verify", "--psi", "sin"});
    CHECK(bogus.code == 1);
    CHECK(bogus.err.find("unknown --psi") != std::string::npos);
}

TEST_CASE("cli: cross-validation over a plan-sized synthetic dataset") {
    TempDir dir;
    std::vector<data::FeatureGroup> groups;
    for (int q = 1; q <= 106; ++q) {
        data::FeatureGroup g;
        g.query_id = q;
        for (int d = 0; d < 3; ++d) {
            const int grade = 2 - d;
            g.docs.push_back({"q" + std::to_string(q) + "d" + std::to_string(d),
                              {double(grade) + 0.1 * double(q % 7), double(d)},
                              grade});
        }
        groups.push_back(std::move(g));
    }
    const std::string letor = dir.file("cv.letor", data::serialize_letor(groups)).string();
    const std::string records = (dir.path / "cv_records.tsv").string();

    const std::vector<std::string> args{
        "evaluate", "--letor", letor, "--cv", "--epochs", "2", "--lr", "0.05",
        "--batch", "16", "--seed", "5", "--k-max", "2", "--method-name", "cvtest",
        "--records-out", records};
    const auto parallel = run_cli(args);
    CHECK(parallel.code == 0);
    CHECK(parallel.out.rfind("method\tndcg@1\tndcg@2\n", 0) == 0);
    CHECK(parallel.out.find("cvtest\t") != std::string::npos);

    std::istringstream in(slurp(records));
    const auto parsed = eval::parse_records_tsv(in);
    CHECK(parsed.size() == 106 * 2);
    bool folds_seen[6] = {};
    for (const auto& rec : parsed) {
        REQUIRE(rec.fold >= 1);
        REQUIRE(rec.fold <= 5);
        folds_seen[rec.fold] = true;
        CHECK(rec.method == "cvtest");
    }
    for (int f = 1; f <= 5; ++f) CHECK(folds_seen[f]);

    // one worker per fold and a single thread must agree exactly
    auto sequential_args = args;
    sequential_args.push_back("--sequential");
    const auto sequential = run_cli(sequential_args);
    CHECK(sequential.code == 0);
    CHECK(sequential.out == parallel.out);
}

TEST_CASE("cli: kernel backends can be forced by flag") {
    const std::string saved = kernels::active().name;
    const auto scalar = run_cli({"--kernels", "scalar", "verify", "--n-max", "3",
                                 "--seeds", "5"});
    CHECK(kernels::active().name == std::string("scalar"));
    CHECK(scalar.code == 0);
    CHECK(scalar.out.find("in 15/15 cases") != std::string::npos);
    REQUIRE(kernels::select(saved));
}
