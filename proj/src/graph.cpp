#include "icenet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "icenet/kernels.hpp"

namespace icenet {

ProvisionalKind classify_score(double y_star, const Thresholds& thr) {
    if (y_star >= thr.ant) return ProvisionalKind::ProbableAntonym;
    if (y_star <= thr.syn) return ProvisionalKind::ProbableSynonym;
    return ProvisionalKind::Unassigned;
}

double score_pair(const RelationPair& pair, EmbeddingTable& table, ResolveMode mode,
                  const EncoderParams& params, const EncoderConfig& cfg) {
    ad::Tape tape;
    ad::Var h = ad::leaf(1, cfg.d, table.resolve(pair.head, mode), false);
    ad::Var t = ad::leaf(1, cfg.d, table.resolve(pair.tail, mode), false);
    return antonym_scores(tape, h, t, params, cfg)->scalar();
}

std::vector<PairScore> score_pairs(const std::vector<RelationPair>& pairs, EmbeddingTable& table,
                                   ResolveMode mode, const EncoderParams& params,
                                   const EncoderConfig& cfg, const Thresholds& thr) {
    // One batched forward over all pairs.
    const int n = static_cast<int>(pairs.size());
    std::vector<double> hv, tv;
    hv.reserve(static_cast<std::size_t>(n) * cfg.d);
    tv.reserve(static_cast<std::size_t>(n) * cfg.d);
    for (const auto& p : pairs) {
        const auto& he = table.resolve(p.head, mode);
        const auto& te = table.resolve(p.tail, mode);
        hv.insert(hv.end(), he.begin(), he.end());
        tv.insert(tv.end(), te.begin(), te.end());
    }
    ad::Tape tape;
    ad::Var scores = antonym_scores(tape, ad::leaf(n, cfg.d, std::move(hv), false),
                                    ad::leaf(n, cfg.d, std::move(tv), false), params, cfg);
    std::vector<PairScore> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        double y = scores->val[i];
        out.push_back({pairs[i], y, classify_score(y, thr)});
    }
    return out;
}

NeighborDicts build_dicts(const std::vector<PairScore>& scores) {
    NeighborDicts d;
    for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
        const auto& s = scores[i];
        switch (s.kind) {
            case ProvisionalKind::ProbableAntonym:
                d.ant_h[s.pair.head].push_back(i);
                d.ant_t[s.pair.tail].push_back(i);
                break;
            case ProvisionalKind::ProbableSynonym:
                d.syn_h[s.pair.head].push_back(i);
                d.syn_t[s.pair.tail].push_back(i);
                break;
            case ProvisionalKind::Unassigned:
                break;
        }
    }
    return d;
}

int AttentiveGraph::index_of(const std::string& word) const {
    auto it = node_index.find(word);
    return it == node_index.end() ? -1 : it->second;
}

namespace {

struct EdgeAccumulator {
    std::map<std::pair<int, int>, GraphEdge> edges;

    void add(int u, int v, double confidence) {
        if (u == v) return;
        if (u > v) std::swap(u, v);
        auto [it, inserted] = edges.emplace(std::make_pair(u, v), GraphEdge{u, v, 1.0, confidence});
        if (!inserted) it->second.confidence = std::max(it->second.confidence, confidence);
    }
};

// Pairwise edges among the endpoint words of all dictionary entries sharing
// one key word. `head_side` picks which endpoint of each stored pair forms
// the clique.
void add_cliques(EdgeAccumulator& acc, const std::map<std::string, std::vector<int>>& dict,
                 const std::vector<PairScore>& scores, const AttentiveGraph& g,
                 const Thresholds& thr, bool head_side) {
    for (const auto& [key, entry_ids] : dict) {
        for (std::size_t a = 0; a < entry_ids.size(); ++a) {
            for (std::size_t b = a + 1; b < entry_ids.size(); ++b) {
                const auto& pa = scores[entry_ids[a]];
                const auto& pb = scores[entry_ids[b]];
                const std::string& wa = head_side ? pa.pair.head : pa.pair.tail;
                const std::string& wb = head_side ? pb.pair.head : pb.pair.tail;
                int u = g.index_of(wa), v = g.index_of(wb);
                if (u < 0 || v < 0) continue;
                double conf = std::min(thr.confidence(pa.y_star), thr.confidence(pb.y_star));
                acc.add(u, v, conf);
            }
        }
    }
}

AttentiveGraph make_node_set(const std::vector<std::string>& vocabulary) {
    AttentiveGraph g;
    g.nodes = vocabulary;
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) g.node_index[g.nodes[i]] = i;
    return g;
}

}  // namespace

std::pair<AttentiveGraph, AttentiveGraph> build_graphs(const NeighborDicts& dicts,
                                                       const std::vector<PairScore>& scores,
                                                       const std::vector<std::string>& vocabulary,
                                                       const Thresholds& thr) {
    AttentiveGraph gh = make_node_set(vocabulary);
    AttentiveGraph gt = make_node_set(vocabulary);

    EdgeAccumulator acc_h;
    add_cliques(acc_h, dicts.syn_t, scores, gh, thr, /*head_side=*/true);
    add_cliques(acc_h, dicts.ant_t, scores, gh, thr, /*head_side=*/true);
    for (auto& [k, e] : acc_h.edges) gh.edges.push_back(e);

    EdgeAccumulator acc_t;
    add_cliques(acc_t, dicts.syn_h, scores, gt, thr, /*head_side=*/false);
    add_cliques(acc_t, dicts.ant_h, scores, gt, thr, /*head_side=*/false);
    for (auto& [k, e] : acc_t.edges) gt.edges.push_back(e);

    return {std::move(gh), std::move(gt)};
}

AttentionScheme parse_scheme(const std::string& name) {
    if (name == "A1") return AttentionScheme::A1;
    if (name == "A2") return AttentionScheme::A2;
    if (name == "A3") return AttentionScheme::A3;
    if (name == "A4") return AttentionScheme::A4;
    if (name == "A5") return AttentionScheme::A5;
    throw ConfigError("unknown attention scheme: " + name);
}

std::string scheme_name(AttentionScheme s) {
    switch (s) {
        case AttentionScheme::A1: return "A1";
        case AttentionScheme::A2: return "A2";
        case AttentionScheme::A3: return "A3";
        case AttentionScheme::A4: return "A4";
        default: return "A5";
    }
}

namespace {

double clamped_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    const auto& ops = kernels::active_ops();
    double na = std::sqrt(ops.dot(a.data(), a.data(), a.size()));
    double nb = std::sqrt(ops.dot(b.data(), b.data(), b.size()));
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = ops.dot(a.data(), b.data(), a.size()) / (na * nb);
    return std::clamp(c, 0.0, 1.0);
}

// ENC-1 projections of every node, batched.
std::vector<std::vector<double>> enc1_outputs(const AttentiveGraph& g, const AttentionContext& ctx) {
    const auto& cfg = *ctx.cfg;
    const int n = static_cast<int>(g.nodes.size());
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(n) * cfg.d);
    for (const auto& w : g.nodes) {
        const auto& e = ctx.table->resolve(w, ResolveMode::OovRandom);
        x.insert(x.end(), e.begin(), e.end());
    }
    ad::Tape tape;
    ad::Var out = encode_f1(tape, ad::leaf(n, cfg.d, std::move(x), false), *ctx.params, cfg);
    std::vector<std::vector<double>> rows(n);
    for (int i = 0; i < n; ++i)
        rows[i].assign(out->val.begin() + static_cast<std::size_t>(i) * cfg.p,
                       out->val.begin() + static_cast<std::size_t>(i + 1) * cfg.p);
    return rows;
}

}  // namespace

void attach_attention(AttentiveGraph& graph, AttentionScheme scheme, const AttentionContext& ctx) {
    switch (scheme) {
        case AttentionScheme::A1: {
            std::mt19937_64 rng(ctx.seed);
            std::uniform_real_distribution<double> dist(0.1, 0.9);
            for (auto& e : graph.edges) e.weight = dist(rng);
            break;
        }
        case AttentionScheme::A2:
            for (auto& e : graph.edges) e.weight = 0.0;
            break;
        case AttentionScheme::A3: {
            if (!ctx.table) throw ConfigError("scheme A3 needs the raw embedding table");
            for (auto& e : graph.edges)
                e.weight = clamped_cosine(ctx.table->resolve(graph.nodes[e.u], ResolveMode::OovRandom),
                                          ctx.table->resolve(graph.nodes[e.v], ResolveMode::OovRandom));
            break;
        }
        case AttentionScheme::A4:
        case AttentionScheme::A5: {
            if (!ctx.table || !ctx.params || !ctx.cfg)
                throw ConfigError("schemes A4/A5 need the embedding table and the trained encoders");
            auto reps = enc1_outputs(graph, ctx);
            for (auto& e : graph.edges) {
                e.weight = clamped_cosine(reps[e.u], reps[e.v]);
                if (scheme == AttentionScheme::A5 && e.confidence < ctx.confidence_band)
                    e.weight *= 0.5;
            }
            break;
        }
    }
    normalize(graph);
}

void normalize(AttentiveGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    std::vector<double> degree(n, 1.0);  // +I contributes 1 per node
    for (const auto& e : graph.edges) {
        degree[e.u] += e.weight;
        degree[e.v] += e.weight;
    }
    std::vector<std::tuple<int, int, double>> triplets;
    triplets.reserve(graph.edges.size() * 2 + n);
    for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, 1.0 / degree[i]);
    for (const auto& e : graph.edges) {
        if (e.weight == 0.0) continue;
        double w = e.weight / std::sqrt(degree[e.u] * degree[e.v]);
        triplets.emplace_back(e.u, e.v, w);
        triplets.emplace_back(e.v, e.u, w);
    }
    graph.normalized = ad::CsrMatrix::from_triplets(n, std::move(triplets));
}

std::pair<AttentiveGraph, AttentiveGraph> run_graph_construction(
    const std::vector<PairScore>& scores, const std::vector<std::string>& vocabulary,
    AttentionScheme scheme, const AttentionContext& ctx, const Thresholds& thr) {
    auto dicts = build_dicts(scores);
    auto [gh, gt] = build_graphs(dicts, scores, vocabulary, thr);
    attach_attention(gh, scheme, ctx);
    attach_attention(gt, scheme, ctx);
    return {std::move(gh), std::move(gt)};
}

void write_graph(std::ostream& f, const AttentiveGraph& graph) {
    f.precision(17);
    f << "# icenet-graph v1\n";
    f << "# nodes " << graph.nodes.size() << "\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) f << i << "\t" << graph.nodes[i] << "\n";
    f << "# edges " << graph.edges.size() << "\n";
    for (const auto& e : graph.edges)
        f << e.u << "\t" << e.v << "\t" << e.weight << "\t" << e.confidence << "\n";
}

void save_graph(const std::string& path, const AttentiveGraph& graph) {
    std::ofstream f(path);
    if (!f) throw FormatError("cannot write graph file: " + path);
    write_graph(f, graph);
}

AttentiveGraph read_graph(std::istream& f) {
    const std::string path = "<graph stream>";
    std::string line;
    auto expect = [&](const std::string& prefix) {
        if (!std::getline(f, line) || line.rfind(prefix, 0) != 0)
            throw FormatError(path + ": expected '" + prefix + "' line");
        return line.substr(prefix.size());
    };
    expect("# icenet-graph v1");
    std::size_t n = std::stoul(expect("# nodes "));
    AttentiveGraph g;
    g.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::getline(f, line);
        auto tab = line.find('\t');
        std::size_t idx = std::stoul(line.substr(0, tab));
        g.nodes[idx] = line.substr(tab + 1);
    }
    for (std::size_t i = 0; i < n; ++i) g.node_index[g.nodes[i]] = static_cast<int>(i);
    std::size_t m = std::stoul(expect("# edges "));
    for (std::size_t i = 0; i < m; ++i) {
        std::getline(f, line);
        std::istringstream iss(line);
        GraphEdge e;
        iss >> e.u >> e.v >> e.weight >> e.confidence;
        g.edges.push_back(e);
    }
    normalize(g);
    return g;
}

AttentiveGraph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open graph file: " + path);
    return read_graph(f);
}

GraphStats graph_stats(const AttentiveGraph& graph) {
    GraphStats s;
    s.node_count = static_cast<int>(graph.nodes.size());
    s.edge_count = static_cast<int>(graph.edges.size());
    std::vector<int> degree(graph.nodes.size(), 0);
    double sum = 0;
    s.weight_min = graph.edges.empty() ? 0.0 : graph.edges[0].weight;
    for (const auto& e : graph.edges) {
        ++degree[e.u];
        ++degree[e.v];
        sum += e.weight;
        s.weight_min = std::min(s.weight_min, e.weight);
        s.weight_max = std::max(s.weight_max, e.weight);
    }
    for (int d : degree) ++s.degree_histogram[d];
    s.weight_mean = graph.edges.empty() ? 0.0 : sum / graph.edges.size();
    return s;
}

}  // namespace icenet
