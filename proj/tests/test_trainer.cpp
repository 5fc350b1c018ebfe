#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "icenet/trainer.hpp"
#include "testutil.hpp"

using namespace icenet;

namespace {

SyntheticSpec small_spec(std::uint64_t seed = 1) {
    SyntheticSpec spec;
    spec.n_clusters = 4;
    spec.words_per_cluster = 6;
    spec.antonym_cluster_pairs = 2;
    spec.d = 10;
    spec.noise = 0.05;
    spec.seed = seed;
    spec.pairs_per_word = 2;
    return spec;
}

TrainConfig small_config(std::uint64_t seed = 1) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.d = 10;
    cfg.enc_hidden = 8;
    cfg.p = 6;
    cfg.gcn_hidden = 5;
    cfg.q = 4;
    cfg.m_init_epochs = 30;
    cfg.epochs = 30;
    cfg.learning_rate = 0.01;
    cfg.patience = 10;
    return cfg;
}

bool same_report(const EvalReport& a, const EvalReport& b) {
    return a.tp == b.tp && a.fp == b.fp && a.fn == b.fn && a.tn == b.tn &&
           a.precision == b.precision && a.recall == b.recall && a.f1 == b.f1;
}

}  // namespace

TEST_CASE("config file parsing") {
    testutil::TempDir dir("cfg");
    auto path = dir.file("a.cfg",
                         "# comment line\n"
                         "seed = 7\n"
                         "learning_rate = 0.01\n"
                         "scheme = A3  # trailing comment\n"
                         "variant = baseline2-no-gcn\n"
                         "sigma = tanh\n"
                         "warm_start = false\n"
                         "\n");
    auto cfg = parse_config_file(path);
    CHECK(cfg.seed == 7);
    CHECK(cfg.learning_rate == 0.01);
    CHECK(cfg.scheme == AttentionScheme::A3);
    CHECK(cfg.variant == Variant::Baseline2NoGcn);
    CHECK(cfg.sigma == ad::Act::Tanh);
    CHECK_FALSE(cfg.warm_start);

    CHECK_THROWS_AS(parse_config_file(dir.file("bad.cfg", "no_such_key = 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(dir.file("junk.cfg", "just some text\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(dir / "missing.cfg"), ConfigError);

    TrainConfig c;
    CHECK_THROWS_AS(apply_config_entry(c, "sigma", "softplus"), ConfigError);
    apply_config_entry(c, "ant_threshold", "0.2");
    CHECK(c.thresholds.ant == 0.2);
}

TEST_CASE("variant names round-trip") {
    for (auto v : {Variant::Full, Variant::Baseline1RandomVectors, Variant::Baseline2NoGcn})
        CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_AS(parse_variant("baseline3"), ConfigError);
}

TEST_CASE("config validation rejects bad values") {
    auto cfg = small_config();
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.negatives_per_positive = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.score_noise_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("synthetic corpus construction") {
    auto [ds, table] = generate_synthetic(small_spec());
    CHECK(ds.train.size() > 0);
    CHECK(ds.dev.size() > 0);
    CHECK(ds.test.size() > 0);
    CHECK(table.dim() == 10);
    auto [ant, syn] = ds.class_balance(Split::Train);
    CHECK(ant > 0);
    CHECK(syn > 0);
    // roughly balanced by construction
    CHECK(std::abs(ant - syn) <= std::max(ant, syn) / 2);
    for (const auto& p : ds.all_pairs()) {
        CHECK(p.head != p.tail);
        CHECK(ds.vocabulary.count(p.head) == 1);
        CHECK(ds.vocabulary.count(p.tail) == 1);
    }
}

TEST_CASE("noise-free synthetic data is separable by a cosine threshold") {
    auto spec = small_spec(3);
    spec.noise = 0.0;
    auto [ds, table] = generate_synthetic(spec);
    // brute-force threshold sweep over raw-embedding cosines
    std::vector<std::pair<double, int>> scored;
    for (const auto& p : ds.all_pairs()) {
        const auto& a = table.resolve(p.head, ResolveMode::Strict);
        const auto& b = table.resolve(p.tail, ResolveMode::Strict);
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        scored.push_back({dot / std::sqrt(na * nb), static_cast<int>(p.label)});
    }
    double best_f1 = 0;
    for (double thr = -1.0; thr <= 1.0; thr += 0.05) {
        std::vector<std::pair<int, int>> preds;
        for (auto [cosine, label] : scored) preds.push_back({cosine < thr ? 1 : 0, label});
        best_f1 = std::max(best_f1, evaluate(preds).f1);
    }
    CHECK(best_f1 == doctest::Approx(1.0));
}

TEST_CASE("lexical split flag produces disjoint vocabularies") {
    auto spec = small_spec(5);
    spec.words_per_cluster = 12;
    spec.pairs_per_word = 3;
    spec.lexical_split = true;
    auto [ds, table] = generate_synthetic(spec);
    CHECK(ds.lexical_split_holds());
}

TEST_CASE("infeasible synthetic sizes are configuration errors") {
    auto spec = small_spec();
    spec.n_clusters = 1;
    CHECK_THROWS_AS(generate_synthetic(spec), ConfigError);
    spec = small_spec();
    spec.antonym_cluster_pairs = 5;
    CHECK_THROWS_AS(generate_synthetic(spec), ConfigError);
}

TEST_CASE("write_synthetic emits loadable files") {
    auto [ds, table] = generate_synthetic(small_spec(7));
    testutil::TempDir dir("synth");
    write_synthetic(dir.path.string(), ds, table);
    auto loaded = load_dataset(dir.path.string(), "other");
    CHECK(loaded.train.size() == ds.train.size());
    CHECK(loaded.dev.size() == ds.dev.size());
    CHECK(loaded.test.size() == ds.test.size());
    CHECK(loaded.vocabulary == ds.vocabulary);
    auto emb = load_embeddings(dir / "embeddings.txt", 10);
    for (const auto& w : ds.vocabulary) {
        const auto& a = emb.resolve(w, ResolveMode::Strict);
        const auto& b = table.resolve(w, ResolveMode::Strict);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
    }
}

TEST_CASE("training is bit-deterministic given the seed") {
    auto [ds, table] = generate_synthetic(small_spec(11));
    auto cfg = small_config(11);
    auto r1 = train_full(ds, table, cfg);
    auto r2 = train_full(ds, table, cfg);
    CHECK(same_report(r1.record.dev_report, r2.record.dev_report));
    CHECK(same_report(r1.record.test_report, r2.record.test_report));
    REQUIRE(r1.record.epoch_losses.size() == r2.record.epoch_losses.size());
    for (std::size_t i = 0; i < r1.record.epoch_losses.size(); ++i)
        CHECK(r1.record.epoch_losses[i].total() == r2.record.epoch_losses[i].total());
    CHECK(r1.record.dev_f1_curve == r2.record.dev_f1_curve);
}

TEST_CASE("graphs stay frozen through joint training") {
    auto [ds, table] = generate_synthetic(small_spec(13));
    auto result = train_full(ds, table, small_config(13));
    CHECK(result.record.adjacency_checksum_before != 0);
    CHECK(result.record.adjacency_checksum_before == result.record.adjacency_checksum_after);
}

TEST_CASE("total loss decreases over the first 10 joint epochs") {
    auto [ds, table] = generate_synthetic(small_spec(17));
    auto cfg = small_config(17);
    cfg.patience = 100;  // keep all 30 epochs
    auto result = train_full(ds, table, cfg);
    REQUIRE(result.record.epoch_losses.size() >= 10);
    CHECK(result.record.epoch_losses[9].total() < result.record.epoch_losses[0].total());
    for (const auto& e : result.record.phase1_losses) CHECK(e.l3 == 0.0);
    for (const auto& e : result.record.epoch_losses)
        CHECK(e.total() == doctest::Approx(e.l1 + e.l2 + e.l3));
}

TEST_CASE("baseline variants run and differ structurally") {
    auto [ds, table] = generate_synthetic(small_spec(19));
    auto cfg = small_config(19);

    cfg.variant = Variant::Baseline2NoGcn;
    auto b2 = train_full(ds, table, cfg);
    CHECK(b2.record.adjacency_checksum_before == 0);
    CHECK(b2.model.graph_h.nodes.empty());

    cfg.variant = Variant::Baseline1RandomVectors;
    auto b1 = train_full(ds, table, cfg);
    CHECK(b1.model.variant == Variant::Baseline1RandomVectors);
    // the table is restored to normal mode afterwards
    cfg.variant = Variant::Full;
    auto full = train_full(ds, table, cfg);
    CHECK(full.record.adjacency_checksum_before != 0);
}

TEST_CASE("run_suite aggregates across seeds") {
    auto [ds, table] = generate_synthetic(small_spec(23));
    auto cfg = small_config(23);
    cfg.epochs = 15;
    cfg.m_init_epochs = 15;
    auto suite = run_suite(ds, table, cfg, 2);
    CHECK(suite.runs.size() == 2);
    CHECK(suite.dev_aggregate.runs.size() == 2);
    double mean = (suite.runs[0].record.test_report.f1 + suite.runs[1].record.test_report.f1) / 2;
    CHECK(suite.test_aggregate.f1 == doctest::Approx(mean).epsilon(1e-12));
    CHECK_THROWS_AS(run_suite(ds, table, cfg, 0), ConfigError);
}

TEST_CASE("checkpoint round-trip reproduces evaluation") {
    auto [ds, table] = generate_synthetic(small_spec(29));
    auto cfg = small_config(29);
    testutil::TempDir dir("ckpt");
    cfg.checkpoint_path = dir / "model.ckpt";
    auto result = train_full(ds, table, cfg);
    CHECK(result.record.checkpoint_path == cfg.checkpoint_path);

    auto loaded = load_model(cfg.checkpoint_path);
    CHECK(loaded.vocabulary == result.model.vocabulary);
    CHECK(loaded.scheme == result.model.scheme);
    for (std::size_t i = 0; i < loaded.enc.all().size(); ++i)
        CHECK(loaded.enc.all()[i]->val == result.model.enc.all()[i]->val);

    auto report = evaluate_split(loaded, table, ds, Split::Test);
    CHECK(same_report(report, result.record.test_report));
    auto dev = evaluate_split(loaded, table, ds, Split::Dev);
    CHECK(same_report(dev, result.record.dev_report));
}

TEST_CASE("run record serializes to valid JSON") {
    auto [ds, table] = generate_synthetic(small_spec(31));
    auto cfg = small_config(31);
    cfg.epochs = 5;
    cfg.m_init_epochs = 5;
    auto result = train_full(ds, table, cfg);
    auto j = nlohmann::json::parse(result.record.to_json());
    CHECK(j["config"]["seed"] == "31");
    CHECK(j["epoch_losses"].size() == result.record.epoch_losses.size());
    CHECK(j["test"]["f1"].get<double>() == result.record.test_report.f1);
    CHECK(j["best_epoch"].get<int>() == result.record.best_epoch);
}
