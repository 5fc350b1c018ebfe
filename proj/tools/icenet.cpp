// Command-line front end: train / eval / build-graph / ablate / synth-data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icenet/kernels.hpp"
#include "icenet/trainer.hpp"

namespace {

using namespace icenet;

struct CommonArgs {
    std::string data_dir;
    std::string embeddings;
    std::string config;
    std::vector<std::string> overrides;
    std::string word_class = "other";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_embeddings = true) {
    cmd->add_option("--data", args.data_dir, "dataset directory (train/dev/test.tsv)")->required();
    auto* e = cmd->add_option("--embeddings", args.embeddings, "pretrained embedding file");
    if (need_embeddings) e->required();
    cmd->add_option("--config", args.config, "key=value config file");
    cmd->add_option("--set", args.overrides, "config override, key=value (repeatable)");
    cmd->add_option("--word-class", args.word_class, "word class tag");
}

TrainConfig load_config(const CommonArgs& args) {
    TrainConfig cfg;
    if (!args.config.empty()) cfg = parse_config_file(args.config);
    for (const auto& kv : args.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
        apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void print_header() { std::cout << "variant\tscheme\tsplit\tP\tR\tF1\n"; }

void print_row(const TrainConfig& cfg, const std::string& split, const EvalReport& r,
               bool with_std) {
    std::cout << variant_name(cfg.variant) << "\t" << scheme_name(cfg.scheme) << "\t" << split
              << "\t" << metrics_row(r, with_std) << "\n";
}

int cmd_train(const CommonArgs& args, const TrainConfig& cfg, int runs,
              const std::string& record_path) {
    auto ds = load_dataset(args.data_dir, args.word_class);
    auto table = load_embeddings(args.embeddings, cfg.d);
    print_header();
    if (runs <= 1) {
        auto result = train_full(ds, table, cfg);
        print_row(cfg, "dev", result.record.dev_report, false);
        print_row(cfg, "test", result.record.test_report, false);
        if (!record_path.empty()) {
            std::ofstream(record_path) << result.record.to_json() << "\n";
            std::cerr << "run record: " << record_path << "\n";
        }
    } else {
        auto suite = run_suite(ds, table, cfg, runs);
        print_row(cfg, "dev", suite.dev_aggregate, true);
        print_row(cfg, "test", suite.test_aggregate, true);
        if (!record_path.empty()) {
            std::ofstream rec(record_path);
            rec << "[\n";
            for (std::size_t i = 0; i < suite.runs.size(); ++i)
                rec << suite.runs[i].record.to_json() << (i + 1 < suite.runs.size() ? ",\n" : "\n");
            rec << "]\n";
            std::cerr << "run records: " << record_path << "\n";
        }
    }
    return 0;
}

int cmd_eval(const std::string& checkpoint, const CommonArgs& args, const std::string& split_name) {
    Split split = split_name == "train" ? Split::Train
                  : split_name == "dev" ? Split::Dev
                                        : Split::Test;
    if (split_name != "train" && split_name != "dev" && split_name != "test")
        throw ConfigError("--split must be train, dev, or test");
    auto model = load_model(checkpoint);
    auto ds = load_dataset(args.data_dir, args.word_class);
    auto table = args.embeddings.empty()
                     ? EmbeddingTable(model.enc_cfg.d, 0)
                     : load_embeddings(args.embeddings, model.enc_cfg.d);
    auto report = evaluate_split(model, table, ds, split);
    std::cout << "split\tP\tR\tF1\n" << split_name << "\t" << metrics_row(report) << "\n";
    return 0;
}

void print_graph_stats(const std::string& name, const AttentiveGraph& g) {
    auto s = graph_stats(g);
    std::cout << name << "\tnodes=" << s.node_count << "\tedges=" << s.edge_count
              << "\tweight min/mean/max=" << s.weight_min << "/" << s.weight_mean << "/"
              << s.weight_max << "\n";
    std::cout << name << "\tdegree histogram:";
    for (auto [deg, count] : s.degree_histogram) std::cout << " " << deg << ":" << count;
    std::cout << "\n";
}

int cmd_build_graph(const CommonArgs& args, const TrainConfig& cfg, const std::string& out_dir) {
    auto ds = load_dataset(args.data_dir, args.word_class);
    auto table = load_embeddings(args.embeddings, cfg.d);
    std::vector<std::string> vocab(ds.vocabulary.begin(), ds.vocabulary.end());
    if (!cfg.strict_oov) table.prepopulate_oov(vocab);
    ResolveMode mode = cfg.strict_oov ? ResolveMode::Strict : ResolveMode::OovRandom;

    auto params = train_m_init(ds, table, cfg);
    auto scores = score_pairs(ds.all_pairs(), table, mode, params, cfg.encoder_config(),
                              cfg.thresholds);
    AttentionContext actx;
    actx.table = &table;
    actx.params = &params;
    EncoderConfig enc_cfg = cfg.encoder_config();
    actx.cfg = &enc_cfg;
    actx.seed = cfg.seed;
    actx.confidence_band = cfg.confidence_band;
    auto [gh, gt] = run_graph_construction(scores, vocab, cfg.scheme, actx, cfg.thresholds);

    std::filesystem::create_directories(out_dir);
    save_graph(out_dir + "/G_h.txt", gh);
    save_graph(out_dir + "/G_t.txt", gt);
    std::cout << "scheme\t" << scheme_name(cfg.scheme) << "\n";
    print_graph_stats("G_h", gh);
    print_graph_stats("G_t", gt);
    std::cerr << "graphs written to " << out_dir << "\n";
    return 0;
}

int cmd_ablate(const CommonArgs& args, TrainConfig cfg, const std::string& schemes_csv, int runs) {
    auto ds = load_dataset(args.data_dir, args.word_class);
    auto table = load_embeddings(args.embeddings, cfg.d);
    std::cout << "scheme\tsplit\tP\tR\tF1\n";
    std::stringstream ss(schemes_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        cfg.scheme = parse_scheme(token);
        auto suite = run_suite(ds, table, cfg, runs);
        std::cout << token << "\tdev\t" << metrics_row(suite.dev_aggregate, runs > 1) << "\n";
        std::cout << token << "\ttest\t" << metrics_row(suite.test_aggregate, runs > 1) << "\n";
    }
    return 0;
}

int cmd_synth(const std::string& out_dir, const SyntheticSpec& spec) {
    auto [ds, table] = generate_synthetic(spec);
    write_synthetic(out_dir, ds, table);
    auto [ant_tr, syn_tr] = ds.class_balance(Split::Train);
    std::cout << "train\t" << ds.train.size() << "\tdev\t" << ds.dev.size() << "\ttest\t"
              << ds.test.size() << "\tvocab\t" << ds.vocabulary.size() << "\ttrain ant:syn\t"
              << ant_tr << ":" << syn_tr << "\n";
    std::cerr << "corpus written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"antonym-vs-synonym classifier"};
    app.require_subcommand(1);

    CommonArgs train_args, graph_args, ablate_args, eval_args;
    int train_runs = 1, ablate_runs = 5;
    std::string record_path, checkpoint, split_name = "test", out_dir, schemes = "A1,A2,A3,A4,A5";
    SyntheticSpec spec;

    auto* train = app.add_subcommand("train", "train the full model");
    add_common(train, train_args);
    train->add_option("--runs", train_runs, "seeds seed..seed+runs-1, aggregated");
    train->add_option("--record", record_path, "write the run record JSON here");

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a split");
    eval->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    eval->add_option("--split", split_name, "train|dev|test");
    add_common(eval, eval_args, false);

    auto* graph = app.add_subcommand("build-graph", "construct and save the graphs");
    add_common(graph, graph_args);
    graph->add_option("--out", out_dir, "output directory")->required();

    auto* ablate = app.add_subcommand("ablate", "compare attention schemes");
    add_common(ablate, ablate_args);
    ablate->add_option("--schemes", schemes, "comma-separated scheme list");
    ablate->add_option("--runs", ablate_runs, "seeds per scheme");

    auto* synth = app.add_subcommand("synth-data", "generate a synthetic corpus");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--clusters", spec.n_clusters, "cluster count");
    synth->add_option("--words", spec.words_per_cluster, "words per cluster");
    synth->add_option("--opposed-pairs", spec.antonym_cluster_pairs, "opposed cluster pairs");
    synth->add_option("--dim", spec.d, "embedding dimension");
    synth->add_option("--noise", spec.noise, "Gaussian noise scale");
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--pairs-per-word", spec.pairs_per_word, "sampling density");
    synth->add_flag("--lexical-split", spec.lexical_split, "disjoint split vocabularies");

    CLI11_PARSE(app, argc, argv);

    try {
        std::cerr << "kernels: " << icenet::kernels::active_ops().name << "\n";
        if (train->parsed()) return cmd_train(train_args, load_config(train_args), train_runs,
                                              record_path);
        if (eval->parsed()) return cmd_eval(checkpoint, eval_args, split_name);
        if (graph->parsed()) return cmd_build_graph(graph_args, load_config(graph_args), out_dir);
        if (ablate->parsed()) return cmd_ablate(ablate_args, load_config(ablate_args), schemes,
                                                ablate_runs);
        if (synth->parsed()) return cmd_synth(out_dir, spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
