#include "ltr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <CLI11.hpp>

#include "ltr/data.hpp"
#include "ltr/embeddings.hpp"
#include "ltr/encoder.hpp"
#include "ltr/eval.hpp"
#include "ltr/kernels.hpp"
#include "ltr/model_io.hpp"
#include "ltr/ordering.hpp"
#include "ltr/ranker.hpp"
#include "ltr/rng.hpp"

namespace ltr::cli {

namespace {

struct Options {
    std::string mode = model_io::kModeRankNetFeatures;

    // feature-mode dataset
    std::string letor_path;
    bool normalize = false;

    // text-mode dataset
    std::string docs_path;
    std::string queries_path;
    std::string judgments_path;
    std::string embeddings_path;
    std::size_t trunc_len = 100;
    std::string filters = "3x10,4x10,5x10";
    double dropout_p = 0.5;

    // training
    std::size_t epochs = 500;
    double lr = 0.0;  // resolved per mode when the flag is absent
    bool lr_given = false;
    std::size_t batch = 64;
    std::size_t hidden = 10;
    std::uint64_t seed = 0;
    int fold = 0;  // 0 = use every group

    // artifacts
    std::string model_out;
    std::string loss_out;
    std::string model_in;
    std::string metrics_out;
    std::string records_out;

    // evaluate
    bool oracle = false;
    bool cv = false;
    bool sequential = false;
    std::string method_name;
    std::size_t k_max = 10;

    // rank
    std::string query_text;
    std::string rank_docs_path;

    // significance
    std::string records_a;
    std::string records_b;
    std::size_t sig_k = 10;

    // verify
    std::size_t n_max = 8;
    std::size_t verify_seeds = 100;
    std::string psi = "identity";
};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double resolved_lr(const Options& opt) {
    if (opt.lr_given) return opt.lr;
    return opt.mode == model_io::kModeConvRankNet ? 1e-3 : 1e-5;
}

bool feature_mode(const Options& opt) {
    return opt.mode == model_io::kModeRankNetFeatures;
}

std::vector<encoder::FilterSpec> parse_filters(const std::string& text) {
    std::vector<encoder::FilterSpec> specs;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::size_t x = item.find('x');
        std::size_t size = 0, copies = 0;
        try {
            if (x == std::string::npos) throw std::invalid_argument("");
            size = std::stoul(item.substr(0, x));
            copies = std::stoul(item.substr(x + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument(
                "filters: expected a SIZExCOPIES list like 3x10,4x10,5x10, got '" +
                text + "'");
        }
        specs.push_back({size, copies});
    }
    if (specs.empty()) {
        throw std::invalid_argument("filters: empty specification");
    }
    return specs;
}

std::vector<data::FeatureGroup> load_feature_groups(const Options& opt) {
    if (opt.letor_path.empty()) {
        throw std::runtime_error("feature mode needs --letor");
    }
    std::vector<data::FeatureGroup> groups = data::parse_letor(opt.letor_path);
    if (groups.empty()) {
        throw std::runtime_error("no query groups in " + opt.letor_path);
    }
    if (opt.normalize) data::min_max_normalize(groups);
    return groups;
}

std::vector<data::TextGroup> load_text_groups(const Options& opt) {
    if (opt.docs_path.empty() || opt.queries_path.empty() || opt.judgments_path.empty()) {
        throw std::runtime_error("text mode needs --docs, --queries and --judgments");
    }
    const data::DocCorpus docs = data::parse_ohsumed_docs(opt.docs_path);
    const data::DocCorpus queries = data::parse_ohsumed_docs(opt.queries_path);
    if (docs.skipped_records > 0) {
        std::cerr << "warning: skipped " << docs.skipped_records
                  << " document records without an identifier\n";
    }
    if (docs.duplicate_records > 0) {
        std::cerr << "warning: " << docs.duplicate_records
                  << " duplicate document identifiers, last record wins\n";
    }
    const std::vector<data::Judgment> judgments = data::parse_judgments(opt.judgments_path);
    std::vector<data::TextGroup> groups =
        data::assemble_text_groups(queries.text_by_id, docs.text_by_id, judgments);
    if (groups.empty()) {
        throw std::runtime_error("no query groups assembled from the text dataset");
    }
    return groups;
}

embeddings::EmbeddingTable load_table(const Options& opt) {
    if (opt.embeddings_path.empty()) {
        throw std::runtime_error("text mode needs --embeddings");
    }
    return embeddings::load_embeddings(opt.embeddings_path, opt.seed);
}

enum class Split { kAll, kTrain, kTest };

template <class Group>
std::vector<Group> pick_split(const std::vector<Group>& groups, int fold, Split split) {
    if (fold == 0) return groups;
    const data::FoldSplit<Group> folds =
        data::make_folds(groups, data::FoldPlan::ohsumed(), fold);
    return split == Split::kTrain ? folds.train : folds.test;
}

template <class Group>
std::vector<ranker::Triple> all_pairs(const std::vector<Group>& groups) {
    std::vector<ranker::Triple> triples;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::vector<ranker::Triple> pairs = ranker::make_pairs(groups[i], i);
        triples.insert(triples.end(), pairs.begin(), pairs.end());
    }
    return triples;
}

void write_loss_csv(const std::string& path, const std::vector<double>& losses) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
        out << (i + 1) << "," << format_double(losses[i]) << "\n";
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << content;
}

encoder::EncoderConfig encoder_config(const Options& opt, std::size_t dim) {
    encoder::EncoderConfig config;
    config.filters = parse_filters(opt.filters);
    config.embedding_dim = dim;
    config.dropout_p = opt.dropout_p;
    return config;
}

int cmd_train(const Options& opt) {
    if (opt.model_out.empty()) {
        throw std::runtime_error("train needs --model-out");
    }
    const std::string loss_path =
        opt.loss_out.empty() ? opt.model_out + ".loss.csv" : opt.loss_out;
    const double lr = resolved_lr(opt);

    if (feature_mode(opt)) {
        const std::vector<data::FeatureGroup> groups = load_feature_groups(opt);
        const std::vector<data::FeatureGroup> train =
            pick_split(groups, opt.fold, Split::kTrain);
        const std::vector<ranker::Triple> triples = all_pairs(train);
        const std::size_t dim = train.empty() ? 0 : train[0].docs.at(0).features.size();
        ranker::RankNetModel model = ranker::init_ranknet({dim, opt.hidden}, opt.seed);
        ranker::TrainResult history;
        if (opt.epochs > 0) {
            history = ranker::train_ranknet(model, train, triples,
                                            {opt.epochs, lr, opt.batch, opt.seed});
        }
        model_io::save_ranknet(model, opt.model_out);
        write_loss_csv(loss_path, history.epoch_mean_loss);
        std::cout << "trained " << opt.mode << " on " << triples.size() << " pairs from "
                  << train.size() << " queries; model: " << opt.model_out << "\n";
        return 0;
    }

    const embeddings::EmbeddingTable table = load_table(opt);
    const std::vector<data::TextGroup> groups = load_text_groups(opt);
    const std::vector<data::TextGroup> train = pick_split(groups, opt.fold, Split::kTrain);
    const ranker::ConvTrainingSet set =
        ranker::build_conv_training_set(train, table, opt.trunc_len);
    ranker::ConvRankNetModel model =
        ranker::init_convranknet(encoder_config(opt, table.dim), opt.hidden, opt.seed);
    ranker::TrainResult history;
    if (opt.epochs > 0) {
        history = ranker::train_convranknet(model, set,
                                            {opt.epochs, lr, opt.batch, opt.seed});
    }
    model_io::save_convranknet(model, opt.model_out);
    write_loss_csv(loss_path, history.epoch_mean_loss);
    std::cout << "trained " << opt.mode << " on " << set.triples.size() << " pairs from "
              << train.size() << " queries; model: " << opt.model_out << "\n";
    return 0;
}

eval::GroupScorer<data::FeatureGroup> oracle_feature_scorer() {
    return [](const data::FeatureGroup& group) {
        std::vector<double> scores;
        scores.reserve(group.docs.size());
        for (const auto& doc : group.docs) scores.push_back(double(doc.grade));
        return scores;
    };
}

eval::GroupScorer<data::TextGroup> oracle_text_scorer() {
    return [](const data::TextGroup& group) {
        std::vector<double> scores;
        scores.reserve(group.docs.size());
        for (const auto& doc : group.docs) scores.push_back(double(doc.grade));
        return scores;
    };
}

eval::GroupScorer<data::FeatureGroup> feature_scorer(
    std::shared_ptr<const ranker::RankNetModel> model) {
    return [model](const data::FeatureGroup& group) {
        std::vector<double> scores;
        scores.reserve(group.docs.size());
        for (const auto& doc : group.docs) {
            scores.push_back(ranker::score(*model, doc.features));
        }
        return scores;
    };
}

eval::GroupScorer<data::TextGroup> text_scorer(
    std::shared_ptr<const ranker::ConvRankNetModel> model,
    std::shared_ptr<const embeddings::EmbeddingTable> table, std::size_t trunc_len) {
    return [model, table, trunc_len](const data::TextGroup& group) {
        const std::vector<double> v_q = encoder::encode(
            embeddings::to_sentence_matrix(group.query_text, *table, trunc_len),
            model->enc);
        std::vector<double> scores;
        scores.reserve(group.docs.size());
        for (const auto& doc : group.docs) {
            const std::vector<double> v_d = encoder::encode(
                embeddings::to_sentence_matrix(doc.text, *table, trunc_len), model->enc);
            scores.push_back(ranker::score_conv(*model, v_q, v_d));
        }
        return scores;
    };
}

// Evaluation of one fixed scorer over (possibly fold-restricted) groups.
template <class Group>
std::pair<eval::MetricTable, std::vector<eval::PerQueryRecord>> evaluate_single(
    const std::vector<Group>& groups, const eval::GroupScorer<Group>& scorer,
    const Options& opt, const std::string& method) {
    const std::vector<Group> subset = pick_split(groups, opt.fold, Split::kTest);
    const eval::FoldEvaluation result = eval::evaluate_groups(subset, scorer, opt.k_max);
    if (result.skipped_empty > 0) {
        std::cerr << "warning: skipped " << result.skipped_empty
                  << " queries with no judged documents\n";
    }

    std::vector<eval::PerQueryRecord> records;
    std::vector<double> mean(opt.k_max, 0.0);
    for (const eval::PerQueryNdcg& row : result.per_query) {
        for (std::size_t k = 1; k <= opt.k_max; ++k) {
            records.push_back({row.query_id, opt.fold, method, k, row.ndcg[k - 1]});
            mean[k - 1] += row.ndcg[k - 1];
        }
    }
    if (!result.per_query.empty()) {
        for (double& v : mean) v /= double(result.per_query.size());
    }
    eval::MetricTable table;
    table.rows.push_back({method, std::move(mean)});
    return {std::move(table), std::move(records)};
}

int cmd_evaluate(const Options& opt) {
    const int sources = int(opt.oracle) + int(opt.cv) + int(!opt.model_in.empty());
    if (sources != 1) {
        throw std::runtime_error("evaluate needs exactly one of --model, --oracle, --cv");
    }

    eval::MetricTable table;
    std::vector<eval::PerQueryRecord> records;

    if (opt.cv) {
        const std::string method = opt.method_name.empty() ? opt.mode : opt.method_name;
        const double lr = resolved_lr(opt);
        const data::FoldPlan plan = data::FoldPlan::ohsumed();
        eval::CrossValidateResult result;

        if (feature_mode(opt)) {
            const std::vector<data::FeatureGroup> groups = load_feature_groups(opt);
            const std::size_t dim = groups[0].docs.at(0).features.size();
            const eval::FoldTrainer<data::FeatureGroup> trainer =
                [&](int fold, const std::vector<data::FeatureGroup>& train,
                    const std::vector<data::FeatureGroup>& validation) {
                    (void)validation;  // fixed epoch count, no early stopping
                    auto model = std::make_shared<ranker::RankNetModel>(
                        ranker::init_ranknet({dim, opt.hidden},
                                             Rng(opt.seed).split(std::uint64_t(fold)).seed()));
                    ranker::train_ranknet(*model, train, all_pairs(train),
                                          {opt.epochs, lr, opt.batch,
                                           Rng(opt.seed).split(100 + std::uint64_t(fold)).seed()});
                    return feature_scorer(model);
                };
            result = eval::cross_validate(groups, plan, trainer, method, opt.k_max,
                                          !opt.sequential);
        } else {
            const auto table_ptr =
                std::make_shared<const embeddings::EmbeddingTable>(load_table(opt));
            const std::vector<data::TextGroup> groups = load_text_groups(opt);
            const eval::FoldTrainer<data::TextGroup> trainer =
                [&, table_ptr](int fold, const std::vector<data::TextGroup>& train,
                               const std::vector<data::TextGroup>& validation) {
                    (void)validation;
                    auto model = std::make_shared<ranker::ConvRankNetModel>(
                        ranker::init_convranknet(encoder_config(opt, table_ptr->dim),
                                                 opt.hidden,
                                                 Rng(opt.seed).split(std::uint64_t(fold)).seed()));
                    const ranker::ConvTrainingSet set =
                        ranker::build_conv_training_set(train, *table_ptr, opt.trunc_len);
                    ranker::train_convranknet(*model, set,
                                              {opt.epochs, lr, opt.batch,
                                               Rng(opt.seed).split(100 + std::uint64_t(fold)).seed()});
                    return text_scorer(model, table_ptr, opt.trunc_len);
                };
            result = eval::cross_validate(groups, plan, trainer, method, opt.k_max,
                                          !opt.sequential);
        }

        if (result.skipped_empty > 0) {
            std::cerr << "warning: skipped " << result.skipped_empty
                      << " queries with no judged documents\n";
        }
        table.rows.push_back({method, result.mean_ndcg});
        records = std::move(result.records);
    } else if (opt.oracle) {
        const std::string method = opt.method_name.empty() ? "oracle" : opt.method_name;
        if (feature_mode(opt)) {
            std::tie(table, records) = evaluate_single(
                load_feature_groups(opt), oracle_feature_scorer(), opt, method);
        } else {
            std::tie(table, records) =
                evaluate_single(load_text_groups(opt), oracle_text_scorer(), opt, method);
        }
    } else {
        const std::string mode = model_io::peek_mode(opt.model_in);
        if (mode != opt.mode) {
            throw std::runtime_error("model " + opt.model_in + " is " + mode +
                                     " but --mode is " + opt.mode);
        }
        const std::string method = opt.method_name.empty() ? opt.mode : opt.method_name;
        if (feature_mode(opt)) {
            auto model = std::make_shared<const ranker::RankNetModel>(
                model_io::load_ranknet(opt.model_in));
            std::tie(table, records) = evaluate_single(
                load_feature_groups(opt), feature_scorer(std::move(model)), opt, method);
        } else {
            auto model = std::make_shared<const ranker::ConvRankNetModel>(
                model_io::load_convranknet(opt.model_in));
            auto table_ptr =
                std::make_shared<const embeddings::EmbeddingTable>(load_table(opt));
            std::tie(table, records) = evaluate_single(
                load_text_groups(opt),
                text_scorer(std::move(model), std::move(table_ptr), opt.trunc_len), opt,
                method);
        }
    }

    const std::string table_text = eval::metric_table_tsv(table);
    std::cout << table_text;
    if (!opt.metrics_out.empty()) write_text_file(opt.metrics_out, table_text);
    if (!opt.records_out.empty()) write_text_file(opt.records_out, eval::records_tsv(records));
    return 0;
}

int cmd_rank(const Options& opt) {
    if (opt.model_in.empty() || opt.rank_docs_path.empty()) {
        throw std::runtime_error("rank needs --model and --docs");
    }
    const std::string mode = model_io::peek_mode(opt.model_in);
    if (mode != model_io::kModeConvRankNet) {
        throw std::runtime_error("rank needs a text-mode model; " + opt.model_in +
                                 " is " + mode);
    }
    if (opt.embeddings_path.empty()) {
        throw std::runtime_error("rank needs --embeddings for a text-mode model");
    }
    const ranker::ConvRankNetModel model = model_io::load_convranknet(opt.model_in);
    const embeddings::EmbeddingTable table = load_table(opt);
    if (table.dim != model.enc.config.embedding_dim) {
        throw std::runtime_error("embedding dimension " + std::to_string(table.dim) +
                                 " does not match the model's " +
                                 std::to_string(model.enc.config.embedding_dim));
    }

    std::ifstream in(opt.rank_docs_path);
    if (!in) {
        throw std::runtime_error("cannot open " + opt.rank_docs_path);
    }
    std::vector<std::string> ids;
    std::vector<embeddings::SentenceMatrix> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        std::string id, text;
        if (tab == std::string::npos) {
            id = std::to_string(ids.size() + 1);
            text = line;
        } else {
            id = line.substr(0, tab);
            text = line.substr(tab + 1);
        }
        ids.push_back(std::move(id));
        docs.push_back(embeddings::to_sentence_matrix(text, table, opt.trunc_len));
    }
    if (docs.empty()) {
        throw std::runtime_error("no documents in " + opt.rank_docs_path);
    }

    const embeddings::SentenceMatrix query =
        embeddings::to_sentence_matrix(opt.query_text, table, opt.trunc_len);
    const std::uint64_t before = encoder::encode_call_count();
    const std::vector<ranker::RankedDoc> ranked =
        ranker::rank_documents(model, query, docs);
    const std::uint64_t passes = encoder::encode_call_count() - before;

    for (const ranker::RankedDoc& doc : ranked) {
        std::cout << ids[doc.index] << "\t" << format_double(doc.score) << "\n";
    }
    std::cout << "# encoder passes: query=1 documents=" << (passes - 1) << "\n";
    return 0;
}

int cmd_significance(const Options& opt) {
    if (opt.records_a.empty() || opt.records_b.empty()) {
        throw std::runtime_error("significance needs --a and --b");
    }
    const auto load = [&](const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open " + path);
        }
        std::unordered_map<int, double> by_query;
        for (const eval::PerQueryRecord& r : eval::parse_records_tsv(in)) {
            if (r.k != opt.sig_k) continue;
            if (!by_query.emplace(r.query_id, r.value).second) {
                throw std::runtime_error(path + ": duplicate record for query " +
                                         std::to_string(r.query_id) + " at k=" +
                                         std::to_string(opt.sig_k));
            }
        }
        if (by_query.empty()) {
            throw std::runtime_error(path + ": no records at k=" +
                                     std::to_string(opt.sig_k));
        }
        return by_query;
    };
    const std::unordered_map<int, double> a = load(opt.records_a);
    const std::unordered_map<int, double> b = load(opt.records_b);

    std::vector<int> missing;
    for (const auto& [qid, value] : a) {
        if (!b.contains(qid)) missing.push_back(qid);
    }
    for (const auto& [qid, value] : b) {
        if (!a.contains(qid)) missing.push_back(qid);
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        std::string list;
        for (int qid : missing) {
            if (!list.empty()) list += ", ";
            list += std::to_string(qid);
        }
        throw std::runtime_error("significance: unpaired queries: " + list);
    }

    std::vector<int> qids;
    qids.reserve(a.size());
    for (const auto& [qid, value] : a) qids.push_back(qid);
    std::sort(qids.begin(), qids.end());
    std::vector<double> x, y;
    for (int qid : qids) {
        x.push_back(a.at(qid));
        y.push_back(b.at(qid));
    }

    const eval::WilcoxonResult result = eval::wilcoxon_two_tailed(x, y);
    std::cout << "W=" << format_double(result.statistic)
              << " p=" << format_double(result.p_value) << " n=" << result.n_effective
              << "\n";
    return 0;
}

int cmd_verify(const Options& opt) {
    std::function<double(double)> psi;
    if (opt.psi == "cube") {
        psi = [](double x) { return x * x * x; };
    } else if (opt.psi != "identity") {
        throw std::runtime_error("verify: unknown --psi '" + opt.psi +
                                 "' (identity, cube)");
    }

    std::size_t checked = 0, agreed = 0;
    for (std::size_t n = 1; n <= opt.n_max; ++n) {
        std::size_t ok = 0;
        for (std::size_t s = 0; s < opt.verify_seeds; ++s) {
            Rng rng = Rng(opt.seed).split(n * 1000003 + s);
            std::vector<double> scores(n);
            bool distinct = false;
            while (!distinct) {
                for (double& v : scores) v = rng.uniform(-1.0, 1.0);
                distinct = true;
                for (std::size_t i = 0; i < n && distinct; ++i) {
                    for (std::size_t j = i + 1; j < n; ++j) {
                        if (scores[i] == scores[j]) {
                            distinct = false;
                            break;
                        }
                    }
                }
            }
            if (ordering::verify_theorem1(scores, psi)) ++ok;
        }
        checked += opt.verify_seeds;
        agreed += ok;
        std::cout << "n=" << n << " seeds=" << opt.verify_seeds << " "
                  << (ok == opt.verify_seeds ? "ok" : "FAIL") << "\n";
    }
    std::cout << "sorted order matches the tournament's topological order in " << agreed
              << "/" << checked << " cases\n";
    return agreed == checked ? 0 : 1;
}

void add_dataset_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--letor", opt.letor_path, "LETOR feature file (feature mode)");
    cmd->add_flag("--normalize", opt.normalize,
                  "per-query min-max feature scaling (feature mode)");
    cmd->add_option("--docs", opt.docs_path, "tagged document file (text mode)");
    cmd->add_option("--queries", opt.queries_path, "tagged query file (text mode)");
    cmd->add_option("--judgments", opt.judgments_path,
                    "judgment triples 'query_id doc_id grade' (text mode)");
    cmd->add_option("--embeddings", opt.embeddings_path,
                    "word-vector text file (text mode)");
    cmd->add_option("--trunc-len", opt.trunc_len, "sentence length cap in tokens")
        ->capture_default_str();
    cmd->add_option("--fold", opt.fold, "restrict to one fold of the 5-fold plan (0 = all)")
        ->check(CLI::Range(0, 5))
        ->capture_default_str();
}

void add_model_shape_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--filters", opt.filters, "encoder filter spec (text mode)")
        ->capture_default_str();
    cmd->add_option("--dropout", opt.dropout_p, "encoder dropout probability (text mode)")
        ->check(CLI::Range(0.0, 0.999999))
        ->capture_default_str();
    cmd->add_option("--hidden", opt.hidden, "scoring-network hidden width")
        ->capture_default_str();
}

CLI::Option* add_train_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--epochs", opt.epochs, "training epochs")->capture_default_str();
    CLI::Option* lr = cmd->add_option(
        "--lr", opt.lr, "learning rate (default 1e-5 feature mode, 1e-3 text mode)");
    lr->check(CLI::PositiveNumber);
    cmd->add_option("--batch", opt.batch, "mini-batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    return lr;
}

}  // namespace

int run(std::vector<std::string> args) {
    Options opt;
    std::string kernels_name;

    CLI::App app{"neural learning-to-rank toolkit"};
    app.require_subcommand(1);
    app.add_option("--kernels", kernels_name, "force compute backend (scalar, avx2)");

    const auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", opt.mode, "ranknet-features or convranknet")
            ->check(CLI::IsMember({model_io::kModeRankNetFeatures,
                                   model_io::kModeConvRankNet}))
            ->capture_default_str();
    };

    CLI::App* train = app.add_subcommand("train", "train a model and save it");
    add_mode(train);
    add_dataset_options(train, opt);
    add_model_shape_options(train, opt);
    CLI::Option* train_lr = add_train_options(train, opt);
    train->add_option("--model-out", opt.model_out, "output model file")->required();
    train->add_option("--loss-out", opt.loss_out,
                      "per-epoch loss CSV (default: <model>.loss.csv)");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "NDCG evaluation of a model, oracle, or CV run");
    add_mode(evaluate);
    add_dataset_options(evaluate, opt);
    add_model_shape_options(evaluate, opt);
    CLI::Option* eval_lr = add_train_options(evaluate, opt);
    evaluate->add_option("--model", opt.model_in, "saved model to evaluate");
    evaluate->add_flag("--oracle", opt.oracle, "score every document by its grade");
    evaluate->add_flag("--cv", opt.cv, "full 5-fold cross-validation (trains per fold)");
    evaluate->add_flag("--sequential", opt.sequential, "run CV folds on one thread");
    evaluate->add_option("--method-name", opt.method_name, "method label in outputs");
    evaluate->add_option("--k-max", opt.k_max, "largest NDCG truncation level")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--metrics-out", opt.metrics_out, "metric table TSV path");
    evaluate->add_option("--records-out", opt.records_out, "per-query records TSV path");

    CLI::App* rank = app.add_subcommand("rank", "rank documents for one query");
    rank->add_option("--model", opt.model_in, "saved text-mode model")->required();
    rank->add_option("--query", opt.query_text, "query text")->required();
    rank->add_option("--docs", opt.rank_docs_path,
                     "document file, one per line ('id<TAB>text' or bare text)")
        ->required();
    rank->add_option("--embeddings", opt.embeddings_path, "word-vector text file");
    rank->add_option("--trunc-len", opt.trunc_len, "sentence length cap in tokens")
        ->capture_default_str();
    rank->add_option("--seed", opt.seed, "seed for the unknown-word vector")
        ->capture_default_str();

    CLI::App* significance = app.add_subcommand(
        "significance", "two-tailed Wilcoxon signed-rank test between record files");
    significance->add_option("--a", opt.records_a, "per-query records TSV")->required();
    significance->add_option("--b", opt.records_b, "per-query records TSV")->required();
    significance->add_option("--k", opt.sig_k, "NDCG truncation level to pair on")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* verify = app.add_subcommand(
        "verify", "check sorted order against the preference tournament");
    verify->add_option("--n-max", opt.n_max, "largest list size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--seeds", opt.verify_seeds, "random score vectors per size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--psi", opt.psi, "sign-preserving comparator wrapper (identity, cube)")
        ->capture_default_str();
    verify->add_option("--seed", opt.seed, "base RNG seed")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ltr");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!kernels_name.empty() && !kernels::select(kernels_name)) {
            std::string names;
            for (const std::string& b : kernels::available()) {
                if (!names.empty()) names += ", ";
                names += b;
            }
            throw std::runtime_error("kernels backend '" + kernels_name +
                                     "' unavailable (have: " + names + ")");
        }
        opt.lr_given = train_lr->count() > 0 || eval_lr->count() > 0;
        if (app.got_subcommand(train)) return cmd_train(opt);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(opt);
        if (app.got_subcommand(rank)) return cmd_rank(opt);
        if (app.got_subcommand(significance)) return cmd_significance(opt);
        if (app.got_subcommand(verify)) return cmd_verify(opt);
        throw std::logic_error("no subcommand dispatched");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ltr::cli
