#include "icenet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "icenet/checkpoint.hpp"
#include "icenet/optimizer.hpp"

namespace icenet {

using ad::Tape;
using ad::Var;

Variant parse_variant(const std::string& name) {
    if (name == "full") return Variant::Full;
    if (name == "baseline1-random-vectors") return Variant::Baseline1RandomVectors;
    if (name == "baseline2-no-gcn") return Variant::Baseline2NoGcn;
    throw ConfigError("unknown variant: " + name);
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Full: return "full";
        case Variant::Baseline1RandomVectors: return "baseline1-random-vectors";
        default: return "baseline2-no-gcn";
    }
}

void TrainConfig::validate() const {
    if (learning_rate <= 0) throw ConfigError("learning_rate must be positive");
    if (d <= 0 || p <= 0 || q <= 0 || enc_hidden <= 0 || gcn_hidden <= 0)
        throw ConfigError("dimensions must be positive");
    if (epochs < 0 || m_init_epochs < 0) throw ConfigError("epoch counts must be non-negative");
    if (negatives_per_positive < 1) throw ConfigError("negatives_per_positive must be >= 1");
    if (score_noise_fraction < 0 || score_noise_fraction > 1)
        throw ConfigError("score_noise_fraction must lie in [0, 1]");
    encoder_config().validate();
    gcn_config().validate();
}

EncoderConfig TrainConfig::encoder_config() const {
    return {d, enc_hidden, p, sigma, gamma1, gamma2};
}

GcnConfig TrainConfig::gcn_config() const { return {p, gcn_hidden, q}; }

void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
    else if (key == "epochs") cfg.epochs = std::stoi(value);
    else if (key == "m_init_epochs") cfg.m_init_epochs = std::stoi(value);
    else if (key == "batch_size") cfg.batch_size = std::stoi(value);
    else if (key == "gamma1") cfg.gamma1 = std::stod(value);
    else if (key == "gamma2") cfg.gamma2 = std::stod(value);
    else if (key == "syn_threshold") cfg.thresholds.syn = std::stod(value);
    else if (key == "ant_threshold") cfg.thresholds.ant = std::stod(value);
    else if (key == "d") cfg.d = std::stoi(value);
    else if (key == "enc_hidden") cfg.enc_hidden = std::stoi(value);
    else if (key == "p") cfg.p = std::stoi(value);
    else if (key == "gcn_hidden") cfg.gcn_hidden = std::stoi(value);
    else if (key == "q") cfg.q = std::stoi(value);
    else if (key == "sigma") {
        if (value == "sigmoid") cfg.sigma = ad::Act::Sigmoid;
        else if (value == "tanh") cfg.sigma = ad::Act::Tanh;
        else throw ConfigError("sigma must be sigmoid or tanh");
    } else if (key == "scheme") cfg.scheme = parse_scheme(value);
    else if (key == "negatives_per_positive") cfg.negatives_per_positive = std::stoi(value);
    else if (key == "variant") cfg.variant = parse_variant(value);
    else if (key == "patience") cfg.patience = std::stoi(value);
    else if (key == "warm_start") cfg.warm_start = (value == "true" || value == "1");
    else if (key == "strict_oov") cfg.strict_oov = (value == "true" || value == "1");
    else if (key == "confidence_band") cfg.confidence_band = std::stod(value);
    else if (key == "score_noise_fraction") cfg.score_noise_fraction = std::stod(value);
    else if (key == "checkpoint_path") cfg.checkpoint_path = value;
    else throw ConfigError("unknown config key: " + key);
}

TrainConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    TrainConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

namespace {

std::vector<std::pair<std::string, std::string>> snapshot(const TrainConfig& c) {
    auto act = c.sigma == ad::Act::Sigmoid ? "sigmoid" : "tanh";
    return {{"seed", std::to_string(c.seed)},
            {"learning_rate", std::to_string(c.learning_rate)},
            {"epochs", std::to_string(c.epochs)},
            {"m_init_epochs", std::to_string(c.m_init_epochs)},
            {"batch_size", std::to_string(c.batch_size)},
            {"gamma1", std::to_string(c.gamma1)},
            {"gamma2", std::to_string(c.gamma2)},
            {"syn_threshold", std::to_string(c.thresholds.syn)},
            {"ant_threshold", std::to_string(c.thresholds.ant)},
            {"d", std::to_string(c.d)},
            {"enc_hidden", std::to_string(c.enc_hidden)},
            {"p", std::to_string(c.p)},
            {"gcn_hidden", std::to_string(c.gcn_hidden)},
            {"q", std::to_string(c.q)},
            {"sigma", act},
            {"scheme", scheme_name(c.scheme)},
            {"negatives_per_positive", std::to_string(c.negatives_per_positive)},
            {"variant", variant_name(c.variant)},
            {"patience", std::to_string(c.patience)},
            {"warm_start", c.warm_start ? "true" : "false"},
            {"strict_oov", c.strict_oov ? "true" : "false"},
            {"confidence_band", std::to_string(c.confidence_band)},
            {"score_noise_fraction", std::to_string(c.score_noise_fraction)}};
}

struct VocabIndex {
    std::vector<std::string> words;
    std::unordered_map<std::string, int> index;

    int at(const std::string& w) const {
        auto it = index.find(w);
        if (it == index.end()) throw MissingWordError(w);
        return it->second;
    }
};

VocabIndex make_vocab(const std::set<std::string>& vocabulary) {
    VocabIndex v;
    v.words.assign(vocabulary.begin(), vocabulary.end());
    for (int i = 0; i < static_cast<int>(v.words.size()); ++i) v.index[v.words[i]] = i;
    return v;
}

Var embed_all(EmbeddingTable& table, const VocabIndex& vocab, int d, ResolveMode mode) {
    std::vector<double> x;
    x.reserve(vocab.words.size() * static_cast<std::size_t>(d));
    for (const auto& w : vocab.words) {
        const auto& e = table.resolve(w, mode);
        x.insert(x.end(), e.begin(), e.end());
    }
    return ad::leaf(static_cast<int>(vocab.words.size()), d, std::move(x), false);
}

// Everything one training run needs; owns the parameters.
struct RunContext {
    const SplitDataset* ds;
    EmbeddingTable* table;
    TrainConfig cfg;
    EncoderConfig enc_cfg;
    GcnConfig gcn_cfg;
    VocabIndex vocab;
    Var x_all;  // |V| x d, constant
    EncoderParams enc;
    GcnParams gcn;
    ad::CsrMatrix adj_h, adj_t;  // set after graph construction
    bool has_graphs = false;

    ResolveMode mode() const {
        return cfg.strict_oov ? ResolveMode::Strict : ResolveMode::OovRandom;
    }
};

struct Batch {
    std::vector<int> all_h, all_t;   // every pair in the chunk (for L3)
    std::vector<int> labels;         // 0 synonym / 1 antonym
    std::vector<int> syn_h, syn_t;   // L1 positives
    std::vector<int> ant_h, ant_t;   // L2 positives
    std::vector<int> nsyn_h, nsyn_t; // L1 negatives
    std::vector<int> nant_h, nant_t; // L2 negatives
};

Var gathered_scores(Tape& tape, Var f1_all, Var f2_all, const std::vector<int>& h,
                    const std::vector<int>& t, bool synonym_route) {
    Var hv = tape.gather_rows(synonym_route ? f1_all : f2_all, h);
    Var tv = tape.gather_rows(f1_all, t);
    return tape.activation(tape.row_dot(hv, tv), ad::Act::Tanh);
}

// L1 and L2 over a batch, computed against whole-vocabulary encoder outputs.
std::pair<Var, Var> batch_margin_losses(Tape& tape, Var f1_all, Var f2_all, const Batch& b,
                                        const RunContext& ctx) {
    auto hinge_pair = [&](const std::vector<int>& ph, const std::vector<int>& pt,
                          const std::vector<int>& nh, const std::vector<int>& nt, bool syn_route,
                          double gamma) -> Var {
        if (ph.empty()) return ad::scalar_leaf(0.0);
        Var loss = tape.hinge_sum(gathered_scores(tape, f1_all, f2_all, ph, pt, syn_route), gamma, -1);
        if (!nh.empty())
            loss = tape.add(loss, tape.hinge_sum(
                                      gathered_scores(tape, f1_all, f2_all, nh, nt, syn_route),
                                      gamma, +1));
        return loss;
    };
    Var l1 = hinge_pair(b.syn_h, b.syn_t, b.nsyn_h, b.nsyn_t, true, ctx.cfg.gamma1);
    Var l2 = hinge_pair(b.ant_h, b.ant_t, b.nant_h, b.nant_t, false, ctx.cfg.gamma2);
    return {l1, l2};
}

std::vector<Batch> make_batches(const RunContext& ctx, std::uint64_t epoch_seed) {
    const auto& train = ctx.ds->train;
    const int n = static_cast<int>(train.size());
    std::mt19937_64 rng(epoch_seed);

    auto negs_syn = sample_negatives(*ctx.ds, Relation::Synonym, ctx.cfg.negatives_per_positive,
                                     rng());
    auto negs_ant = sample_negatives(*ctx.ds, Relation::Antonym, ctx.cfg.negatives_per_positive,
                                     rng());

    // position of each train pair within its relation's positive list
    std::vector<int> rel_pos(n);
    std::vector<std::vector<std::size_t>> syn_negs_by_pos, ant_negs_by_pos;
    {
        int syn_count = 0, ant_count = 0;
        for (int i = 0; i < n; ++i)
            rel_pos[i] = train[i].label == Relation::Synonym ? syn_count++ : ant_count++;
        syn_negs_by_pos.resize(syn_count);
        ant_negs_by_pos.resize(ant_count);
        for (std::size_t j = 0; j < negs_syn.size(); ++j)
            syn_negs_by_pos[negs_syn[j].source_index].push_back(j);
        for (std::size_t j = 0; j < negs_ant.size(); ++j)
            ant_negs_by_pos[negs_ant[j].source_index].push_back(j);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const int bsz = ctx.cfg.batch_size > 0 ? ctx.cfg.batch_size : n;
    if (ctx.cfg.batch_size > 0) std::shuffle(order.begin(), order.end(), rng);

    std::vector<Batch> batches;
    for (int start = 0; start < n; start += bsz) {
        Batch b;
        for (int k = start; k < std::min(start + bsz, n); ++k) {
            const auto& pair = train[order[k]];
            int h = ctx.vocab.at(pair.head), t = ctx.vocab.at(pair.tail);
            b.all_h.push_back(h);
            b.all_t.push_back(t);
            b.labels.push_back(static_cast<int>(pair.label));
            if (pair.label == Relation::Synonym) {
                b.syn_h.push_back(h);
                b.syn_t.push_back(t);
                for (std::size_t j : syn_negs_by_pos[rel_pos[order[k]]]) {
                    b.nsyn_h.push_back(ctx.vocab.at(negs_syn[j].head));
                    b.nsyn_t.push_back(ctx.vocab.at(negs_syn[j].tail));
                }
            } else {
                b.ant_h.push_back(h);
                b.ant_t.push_back(t);
                for (std::size_t j : ant_negs_by_pos[rel_pos[order[k]]]) {
                    b.nant_h.push_back(ctx.vocab.at(negs_ant[j].head));
                    b.nant_t.push_back(ctx.vocab.at(negs_ant[j].tail));
                }
            }
        }
        batches.push_back(std::move(b));
    }
    return batches;
}

// One optimization epoch. with_gcn selects the joint objective over the
// frozen graphs; otherwise encoder-only L1+L2 (plus, for the no-graph
// baseline, L3 on encoder-output features).
EpochLosses run_epoch(RunContext& ctx, Adam& opt, std::uint64_t epoch_seed, bool with_l3,
                      bool with_gcn) {
    EpochLosses losses;
    for (const auto& b : make_batches(ctx, epoch_seed)) {
        Tape tape;
        Var f1_all = encode_f1(tape, ctx.x_all, ctx.enc, ctx.enc_cfg);
        Var f2_all = encode_f2(tape, ctx.x_all, ctx.enc, ctx.enc_cfg);
        auto [l1, l2] = batch_margin_losses(tape, f1_all, f2_all, b, ctx);
        Var loss = tape.add(l1, l2);
        Var l3;
        if (with_l3) {
            Var features;
            if (with_gcn) {
                auto reps = gcn_forward(tape, f1_all, f2_all, ctx.adj_h, ctx.adj_t, ctx.gcn);
                features = pair_features(tape, reps, b.all_h, b.all_t);
            } else {
                features = eq5_features(tape, tape.gather_rows(f1_all, b.all_h),
                                        tape.gather_rows(f1_all, b.all_t),
                                        tape.gather_rows(f2_all, b.all_h),
                                        tape.gather_rows(f2_all, b.all_t));
            }
            l3 = loss_l3(tape, classify_logits(tape, features, ctx.gcn), b.labels);
            loss = tape.add(loss, l3);
        }
        opt.zero_grad();
        tape.backward(loss);
        opt.step();
        losses.l1 += l1->scalar();
        losses.l2 += l2->scalar();
        if (l3) losses.l3 += l3->scalar();
    }
    return losses;
}

std::vector<std::pair<int, int>> predict_pairs(RunContext& ctx, const std::vector<RelationPair>& pairs,
                                               bool with_gcn) {
    Tape tape;
    Var f1_all = encode_f1(tape, ctx.x_all, ctx.enc, ctx.enc_cfg);
    Var f2_all = encode_f2(tape, ctx.x_all, ctx.enc, ctx.enc_cfg);
    std::vector<int> h, t;
    for (const auto& p : pairs) {
        h.push_back(ctx.vocab.at(p.head));
        t.push_back(ctx.vocab.at(p.tail));
    }
    Var features;
    if (with_gcn) {
        auto reps = gcn_forward(tape, f1_all, f2_all, ctx.adj_h, ctx.adj_t, ctx.gcn);
        features = pair_features(tape, reps, h, t);
    } else {
        features = eq5_features(tape, tape.gather_rows(f1_all, h), tape.gather_rows(f1_all, t),
                                tape.gather_rows(f2_all, h), tape.gather_rows(f2_all, t));
    }
    auto preds = predictions_from_logits(classify_logits(tape, features, ctx.gcn));
    std::vector<std::pair<int, int>> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out.emplace_back(preds[i].label, static_cast<int>(pairs[i].label));
    return out;
}

std::uint64_t checksum_doubles(std::uint64_t h, const double* data, std::size_t n) {
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t adjacency_checksum(const ad::CsrMatrix& a, const ad::CsrMatrix& b) {
    std::uint64_t h = 14695981039346656037ull;
    h = checksum_doubles(h, a.val.data(), a.val.size());
    h = checksum_doubles(h, b.val.data(), b.val.size());
    return h;
}

void inject_score_noise(std::vector<PairScore>& scores, const TrainConfig& cfg) {
    if (cfg.score_noise_fraction <= 0.0) return;
    std::mt19937_64 rng(cfg.seed ^ 0x5c0e5c0e5ull);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> offset(0.0, 0.04);
    for (auto& s : scores) {
        if (coin(rng) >= cfg.score_noise_fraction) continue;
        // wrong-side, near-threshold replacement
        if (s.pair.label == Relation::Antonym)
            s.y_star = cfg.thresholds.syn - offset(rng);
        else
            s.y_star = cfg.thresholds.ant + offset(rng);
        s.kind = classify_score(s.y_star, cfg.thresholds);
    }
}

RunContext make_context(const SplitDataset& ds, EmbeddingTable& table, const TrainConfig& cfg) {
    cfg.validate();
    RunContext ctx;
    ctx.ds = &ds;
    ctx.table = &table;
    ctx.cfg = cfg;
    ctx.enc_cfg = cfg.encoder_config();
    ctx.gcn_cfg = cfg.gcn_config();
    ctx.vocab = make_vocab(ds.vocabulary);
    if (!cfg.strict_oov) table.prepopulate_oov(ctx.vocab.words);
    ctx.x_all = embed_all(table, ctx.vocab, cfg.d, ctx.mode());
    std::mt19937_64 rng(cfg.seed);
    ctx.enc = init_encoders(ctx.enc_cfg, rng);
    ctx.gcn = init_gcn(ctx.gcn_cfg, rng);
    return ctx;
}

}  // namespace

EncoderParams train_m_init(const SplitDataset& ds, EmbeddingTable& table, const TrainConfig& cfg) {
    RunContext ctx = make_context(ds, table, cfg);
    Adam opt(ctx.enc.all(), cfg.learning_rate);
    for (int e = 0; e < cfg.m_init_epochs; ++e)
        run_epoch(ctx, opt, cfg.seed * 2654435761ull + e, false, false);
    return ctx.enc;
}

TrainResult train_full(const SplitDataset& ds, EmbeddingTable& table, const TrainConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool random_vectors = cfg.variant == Variant::Baseline1RandomVectors;
    if (random_vectors) table.set_random_mode(true);

    TrainResult result;
    result.record.config_snapshot = snapshot(cfg);
    RunContext ctx = make_context(ds, table, cfg);

    // Phase 1: preliminary model, encoders only.
    {
        Adam opt(ctx.enc.all(), cfg.learning_rate);
        for (int e = 0; e < cfg.m_init_epochs; ++e)
            result.record.phase1_losses.push_back(
                run_epoch(ctx, opt, cfg.seed * 2654435761ull + e, false, false));
    }

    const bool with_gcn = cfg.variant != Variant::Baseline2NoGcn;

    AttentiveGraph graph_h, graph_t;
    if (with_gcn) {
        // Phase 2: one-shot graph construction over D = train+dev+test.
        // Only the preliminary model's scores of dev/test pairs are used,
        // never their labels.
        auto scores = score_pairs(ds.all_pairs(), table, ctx.mode(), ctx.enc, ctx.enc_cfg,
                                  cfg.thresholds);
        inject_score_noise(scores, cfg);
        AttentionContext actx;
        actx.table = &table;
        actx.params = &ctx.enc;
        actx.cfg = &ctx.enc_cfg;
        actx.seed = cfg.seed;
        actx.confidence_band = cfg.confidence_band;
        std::tie(graph_h, graph_t) =
            run_graph_construction(scores, ctx.vocab.words, cfg.scheme, actx, cfg.thresholds);
        ctx.adj_h = graph_h.normalized;
        ctx.adj_t = graph_t.normalized;
        ctx.has_graphs = true;
    }

    if (!cfg.warm_start) {
        std::mt19937_64 rng(cfg.seed + 17);
        ctx.enc = init_encoders(ctx.enc_cfg, rng);
    }

    result.record.adjacency_checksum_before =
        with_gcn ? adjacency_checksum(ctx.adj_h, ctx.adj_t) : 0;

    // Phase 3: joint optimization over the frozen graphs, dev early stopping.
    {
        std::vector<Var> params = ctx.enc.all();
        if (with_gcn) {
            auto g = ctx.gcn.all();
            params.insert(params.end(), g.begin(), g.end());
        } else {
            params.push_back(ctx.gcn.w);
            params.push_back(ctx.gcn.b);
        }
        Adam opt(params, cfg.learning_rate);

        double best_f1 = -1.0;
        int since_best = 0;
        std::vector<std::vector<double>> best_values;
        auto snapshot_params = [&] {
            best_values.clear();
            for (const auto& p : params) best_values.push_back(p->val);
        };
        snapshot_params();

        for (int e = 0; e < cfg.epochs; ++e) {
            result.record.epoch_losses.push_back(
                run_epoch(ctx, opt, cfg.seed * 0x9e3779b9ull + 1000003ull * e, true, with_gcn));
            double dev_f1 = evaluate(predict_pairs(ctx, ds.dev, with_gcn)).f1;
            result.record.dev_f1_curve.push_back(dev_f1);
            if (dev_f1 > best_f1) {
                best_f1 = dev_f1;
                result.record.best_epoch = e;
                since_best = 0;
                snapshot_params();
            } else if (++since_best >= cfg.patience) {
                break;
            }
        }
        for (std::size_t i = 0; i < params.size(); ++i) params[i]->val = best_values[i];
    }

    result.record.adjacency_checksum_after =
        with_gcn ? adjacency_checksum(ctx.adj_h, ctx.adj_t) : 0;

    result.record.dev_report = evaluate(predict_pairs(ctx, ds.dev, with_gcn));
    result.record.test_report = evaluate(predict_pairs(ctx, ds.test, with_gcn));

    result.model.enc_cfg = ctx.enc_cfg;
    result.model.gcn_cfg = ctx.gcn_cfg;
    result.model.enc = ctx.enc;
    result.model.gcn = ctx.gcn;
    result.model.graph_h = std::move(graph_h);
    result.model.graph_t = std::move(graph_t);
    result.model.vocabulary = ctx.vocab.words;
    result.model.variant = cfg.variant;
    result.model.scheme = cfg.scheme;

    if (!cfg.checkpoint_path.empty()) {
        std::vector<std::pair<std::string, std::string>> meta = result.record.config_snapshot;
        save_model(cfg.checkpoint_path, result.model, meta);
        result.record.checkpoint_path = cfg.checkpoint_path;
    }

    if (random_vectors) table.set_random_mode(false);
    result.record.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

EvalReport evaluate_split(const TrainedModel& model, EmbeddingTable& table, const SplitDataset& ds,
                          Split split) {
    RunContext ctx;
    SplitDataset local = ds;  // vocabulary comes from the model, pairs from ds
    ctx.ds = &local;
    ctx.table = &table;
    ctx.enc_cfg = model.enc_cfg;
    ctx.gcn_cfg = model.gcn_cfg;
    ctx.enc = model.enc;
    ctx.gcn = model.gcn;
    ctx.vocab.words = model.vocabulary;
    for (int i = 0; i < static_cast<int>(model.vocabulary.size()); ++i)
        ctx.vocab.index[model.vocabulary[i]] = i;
    if (model.variant == Variant::Baseline1RandomVectors) table.set_random_mode(true);
    table.prepopulate_oov(ctx.vocab.words);
    ctx.x_all = embed_all(table, ctx.vocab, model.enc_cfg.d, ResolveMode::OovRandom);
    bool with_gcn = model.variant != Variant::Baseline2NoGcn;
    if (with_gcn) {
        ctx.adj_h = model.graph_h.normalized;
        ctx.adj_t = model.graph_t.normalized;
    }
    auto report = evaluate(predict_pairs(ctx, ds.pairs(split), with_gcn));
    if (model.variant == Variant::Baseline1RandomVectors) table.set_random_mode(false);
    return report;
}

SuiteResult run_suite(const SplitDataset& ds, EmbeddingTable& table, TrainConfig cfg, int n_runs) {
    if (n_runs < 1) throw ConfigError("run_suite: n_runs must be >= 1");
    SuiteResult suite;
    std::vector<EvalReport> dev, test;
    const std::uint64_t base = cfg.seed;
    for (int i = 0; i < n_runs; ++i) {
        cfg.seed = base + static_cast<std::uint64_t>(i);
        suite.runs.push_back(train_full(ds, table, cfg));
        dev.push_back(suite.runs.back().record.dev_report);
        test.push_back(suite.runs.back().record.test_report);
    }
    suite.dev_aggregate = aggregate(dev);
    suite.test_aggregate = aggregate(test);
    return suite;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

std::pair<SplitDataset, EmbeddingTable> generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_clusters < 2) throw ConfigError("synthetic: need at least 2 clusters");
    if (spec.antonym_cluster_pairs < 1 || 2 * spec.antonym_cluster_pairs > spec.n_clusters)
        throw ConfigError("synthetic: antonym_cluster_pairs must fit in the cluster count");
    if (spec.words_per_cluster < 2) throw ConfigError("synthetic: need at least 2 words per cluster");
    if (spec.d < 1) throw ConfigError("synthetic: dimension must be positive");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto unit_vector = [&] {
        std::vector<double> v(spec.d);
        double norm = 0;
        do {
            norm = 0;
            for (auto& x : v) {
                x = gauss(rng);
                norm += x * x;
            }
        } while (norm == 0);
        norm = std::sqrt(norm);
        for (auto& x : v) x /= norm;
        return v;
    };

    // opposed clusters sit at +-c; the rest get independent directions
    std::vector<std::vector<double>> centroids(spec.n_clusters);
    for (int k = 0; k < spec.antonym_cluster_pairs; ++k) {
        centroids[2 * k] = unit_vector();
        centroids[2 * k + 1] = centroids[2 * k];
        for (auto& x : centroids[2 * k + 1]) x = -x;
    }
    for (int k = 2 * spec.antonym_cluster_pairs; k < spec.n_clusters; ++k)
        centroids[k] = unit_vector();

    EmbeddingTable table(spec.d, spec.seed ^ 0xc0ffee);
    std::vector<std::vector<std::string>> cluster_words(spec.n_clusters);
    for (int k = 0; k < spec.n_clusters; ++k) {
        for (int i = 0; i < spec.words_per_cluster; ++i) {
            std::string w = "c" + std::to_string(k) + "_w" + std::to_string(i);
            std::vector<double> v = centroids[k];
            for (auto& x : v) x += spec.noise * gauss(rng);
            table.add(w, std::move(v));
            cluster_words[k].push_back(std::move(w));
        }
    }

    // word split assignment (used only under the lexical flag)
    auto word_split = [&](const std::string& w, int idx, int total) {
        (void)w;
        if (idx < total * 7 / 10) return Split::Train;
        if (idx < total * 8 / 10) return Split::Dev;
        return Split::Test;
    };

    struct Raw {
        std::string h, t;
        Relation rel;
        Split forced;
    };
    std::vector<Raw> raw;
    std::set<std::string> seen;
    auto add_pair = [&](const std::string& h, const std::string& t, Relation rel, Split forced) {
        if (h == t) return false;
        std::string key = h < t ? h + "\t" + t : t + "\t" + h;
        if (!seen.insert(key + std::to_string(static_cast<int>(rel))).second) return false;
        raw.push_back({h, t, rel, forced});
        return true;
    };

    auto split_of = [&](const std::string& w) {
        auto us = w.find("_w");
        int idx = std::stoi(w.substr(us + 2));
        return word_split(w, idx, spec.words_per_cluster);
    };

    const int syn_target = spec.n_clusters * spec.words_per_cluster * spec.pairs_per_word;
    const int ant_target = syn_target;

    std::uniform_int_distribution<int> cluster_dist(0, spec.n_clusters - 1);
    std::uniform_int_distribution<int> word_dist(0, spec.words_per_cluster - 1);
    std::uniform_int_distribution<int> opp_dist(0, spec.antonym_cluster_pairs - 1);

    int guard = 0;
    int synonyms = 0;
    while (synonyms < syn_target && ++guard < syn_target * 100) {
        int k = cluster_dist(rng);
        const auto& a = cluster_words[k][word_dist(rng)];
        const auto& b = cluster_words[k][word_dist(rng)];
        if (spec.lexical_split && split_of(a) != split_of(b)) continue;
        if (add_pair(a, b, Relation::Synonym, spec.lexical_split ? split_of(a) : Split::Train))
            ++synonyms;
    }
    guard = 0;
    int antonyms = 0;
    while (antonyms < ant_target && ++guard < ant_target * 100) {
        int k = opp_dist(rng);
        const auto& a = cluster_words[2 * k][word_dist(rng)];
        const auto& b = cluster_words[2 * k + 1][word_dist(rng)];
        if (spec.lexical_split && split_of(a) != split_of(b)) continue;
        if (add_pair(a, b, Relation::Antonym, spec.lexical_split ? split_of(a) : Split::Train))
            ++antonyms;
    }
    if (synonyms < syn_target / 2 || antonyms < ant_target / 2)
        throw ConfigError("synthetic: sizes infeasible for the requested pair counts");

    SplitDataset ds;
    ds.word_class = "other";
    if (spec.lexical_split) {
        for (auto& r : raw) {
            RelationPair p{r.h, r.t, r.rel, r.forced};
            (r.forced == Split::Train ? ds.train : r.forced == Split::Dev ? ds.dev : ds.test)
                .push_back(p);
        }
    } else {
        // 70/10/20 per class, shuffled
        std::vector<Raw*> per_class[2];
        for (auto& r : raw) per_class[static_cast<int>(r.rel)].push_back(&r);
        for (auto& cls : per_class) {
            std::shuffle(cls.begin(), cls.end(), rng);
            const int n = static_cast<int>(cls.size());
            for (int i = 0; i < n; ++i) {
                Split s = i < n * 7 / 10 ? Split::Train : i < n * 8 / 10 ? Split::Dev : Split::Test;
                (s == Split::Train ? ds.train : s == Split::Dev ? ds.dev : ds.test)
                    .push_back({cls[i]->h, cls[i]->t, cls[i]->rel, s});
            }
        }
    }
    for (const auto& p : ds.all_pairs()) {
        ds.vocabulary.insert(p.head);
        ds.vocabulary.insert(p.tail);
    }
    if (ds.train.empty() || ds.dev.empty() || ds.test.empty())
        throw ConfigError("synthetic: sizes too small to fill every split");
    return {std::move(ds), std::move(table)};
}

void write_synthetic(const std::string& dir, const SplitDataset& ds, EmbeddingTable& table) {
    std::filesystem::create_directories(dir);
    auto dump = [&](const std::string& name, const std::vector<RelationPair>& pairs) {
        std::ofstream f(dir + "/" + name);
        for (const auto& p : pairs)
            f << p.head << "\t" << p.tail << "\t" << static_cast<int>(p.label) << "\n";
    };
    dump("train.tsv", ds.train);
    dump("dev.tsv", ds.dev);
    dump("test.tsv", ds.test);

    std::ofstream f(dir + "/embeddings.txt");
    f.precision(17);
    std::vector<std::string> words(ds.vocabulary.begin(), ds.vocabulary.end());
    f << words.size() << " " << table.dim() << "\n";
    for (const auto& w : words) {
        f << w;
        for (double x : table.resolve(w, ResolveMode::OovRandom)) f << " " << x;
        f << "\n";
    }
}

// ---------------------------------------------------------------------------
// Checkpointing and reporting

void save_model(const std::string& path, const TrainedModel& model,
                const std::vector<std::pair<std::string, std::string>>& meta) {
    Checkpoint ckpt;
    for (const auto& [k, v] : meta) ckpt.meta[k] = v;
    ckpt.meta["variant"] = variant_name(model.variant);
    ckpt.meta["scheme"] = scheme_name(model.scheme);
    ckpt.meta["d"] = std::to_string(model.enc_cfg.d);
    ckpt.meta["enc_hidden"] = std::to_string(model.enc_cfg.hidden);
    ckpt.meta["p"] = std::to_string(model.enc_cfg.p);
    ckpt.meta["gcn_hidden"] = std::to_string(model.gcn_cfg.hidden);
    ckpt.meta["q"] = std::to_string(model.gcn_cfg.q);
    ckpt.meta["sigma"] = model.enc_cfg.sigma == ad::Act::Sigmoid ? "sigmoid" : "tanh";
    ckpt.meta["gamma1"] = std::to_string(model.enc_cfg.gamma1);
    ckpt.meta["gamma2"] = std::to_string(model.enc_cfg.gamma2);
    {
        std::ostringstream os;
        for (const auto& w : model.vocabulary) os << w << "\n";
        ckpt.meta["vocabulary"] = os.str();
    }
    for (const auto& [name, var] : model.enc.named()) ckpt.add_tensor("enc." + name, var);
    for (const auto& [name, var] : model.gcn.named()) ckpt.add_tensor("gcn." + name, var);
    if (model.variant != Variant::Baseline2NoGcn) {
        ckpt.graphs.emplace_back("G_h", model.graph_h);
        ckpt.graphs.emplace_back("G_t", model.graph_t);
    }
    save_checkpoint(path, ckpt);
}

TrainedModel load_model(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    TrainedModel m;
    auto meta = [&](const std::string& k) {
        auto it = ckpt.meta.find(k);
        if (it == ckpt.meta.end()) throw FormatError("checkpoint missing meta key: " + k);
        return it->second;
    };
    m.variant = parse_variant(meta("variant"));
    m.scheme = parse_scheme(meta("scheme"));
    m.enc_cfg.d = std::stoi(meta("d"));
    m.enc_cfg.hidden = std::stoi(meta("enc_hidden"));
    m.enc_cfg.p = std::stoi(meta("p"));
    m.enc_cfg.sigma = meta("sigma") == "tanh" ? ad::Act::Tanh : ad::Act::Sigmoid;
    m.enc_cfg.gamma1 = std::stod(meta("gamma1"));
    m.enc_cfg.gamma2 = std::stod(meta("gamma2"));
    m.gcn_cfg.p = m.enc_cfg.p;
    m.gcn_cfg.hidden = std::stoi(meta("gcn_hidden"));
    m.gcn_cfg.q = std::stoi(meta("q"));
    {
        std::istringstream is(meta("vocabulary"));
        std::string w;
        while (std::getline(is, w))
            if (!w.empty()) m.vocabulary.push_back(w);
    }
    std::mt19937_64 rng(0);
    m.enc = init_encoders(m.enc_cfg, rng);
    m.gcn = init_gcn(m.gcn_cfg, rng);
    for (auto& [name, var] : m.enc.named()) ckpt.restore_tensor("enc." + name, var);
    for (auto& [name, var] : m.gcn.named()) ckpt.restore_tensor("gcn." + name, var);
    for (auto& [name, graph] : ckpt.graphs) {
        if (name == "G_h") m.graph_h = graph;
        if (name == "G_t") m.graph_t = graph;
    }
    return m;
}

std::string RunRecord::to_json() const {
    nlohmann::json j;
    for (const auto& [k, v] : config_snapshot) j["config"][k] = v;
    auto losses_json = [](const std::vector<EpochLosses>& ls) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& l : ls)
            arr.push_back({{"l1", l.l1}, {"l2", l.l2}, {"l3", l.l3}, {"total", l.total()}});
        return arr;
    };
    j["phase1_losses"] = losses_json(phase1_losses);
    j["epoch_losses"] = losses_json(epoch_losses);
    j["dev_f1_curve"] = dev_f1_curve;
    auto report_json = [](const EvalReport& r) {
        return nlohmann::json{{"tp", r.tp},           {"fp", r.fp},
                              {"fn", r.fn},           {"tn", r.tn},
                              {"precision", r.precision}, {"recall", r.recall},
                              {"f1", r.f1}};
    };
    j["dev"] = report_json(dev_report);
    j["test"] = report_json(test_report);
    j["wall_clock_sec"] = wall_clock_sec;
    j["best_epoch"] = best_epoch;
    j["checkpoint_path"] = checkpoint_path;
    j["adjacency_checksum_before"] = adjacency_checksum_before;
    j["adjacency_checksum_after"] = adjacency_checksum_after;
    return j.dump(2);
}

}  // namespace icenet
