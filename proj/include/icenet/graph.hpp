#pragma once

// Transductive graph construction: score every pair with the preliminary
// encoder-only model, threshold into probable synonym/antonym dictionaries,
// and emit the head-word and tail-word graphs with attention-weighted,
// renormalized symmetric adjacency. All five hard-attention schemes (A1-A5)
// live here.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "icenet/ad.hpp"
#include "icenet/dataset.hpp"
#include "icenet/embeddings.hpp"
#include "icenet/encoders.hpp"

namespace icenet {

struct Thresholds {
    double syn = 0.15;  // y* <= syn  -> probable synonym
    double ant = 0.10;  // y* >= ant  -> probable antonym (checked first)

    // distance to the nearest threshold; small = low-confidence score
    double confidence(double y_star) const {
        double da = y_star - ant, ds = syn - y_star;
        return std::min(da < 0 ? -da : da, ds < 0 ? -ds : ds);
    }
};

enum class ProvisionalKind { ProbableAntonym, ProbableSynonym, Unassigned };

struct PairScore {
    RelationPair pair;
    double y_star;
    ProvisionalKind kind;
};

// Classification order follows the algorithm's if/elif: the antonym test
// wins when both bands match (they overlap in [ant, syn]).
ProvisionalKind classify_score(double y_star, const Thresholds& thr);

// y* = tanh(<f2(x_h), f1(x_t)>): high score = probable antonym.
double score_pair(const RelationPair& pair, EmbeddingTable& table, ResolveMode mode,
                  const EncoderParams& params, const EncoderConfig& cfg);

std::vector<PairScore> score_pairs(const std::vector<RelationPair>& pairs, EmbeddingTable& table,
                                   ResolveMode mode, const EncoderParams& params,
                                   const EncoderConfig& cfg, const Thresholds& thr);

struct NeighborDicts {
    // word -> indices into the PairScore list
    std::map<std::string, std::vector<int>> syn_h, ant_h, syn_t, ant_t;
};

NeighborDicts build_dicts(const std::vector<PairScore>& scores);

struct GraphEdge {
    int u, v;  // node indices, u < v
    double weight = 1.0;
    // max over generating instances of min pairwise score confidence
    double confidence = 0.0;
};

struct AttentiveGraph {
    std::vector<std::string> nodes;
    std::unordered_map<std::string, int> node_index;
    std::vector<GraphEdge> edges;
    ad::CsrMatrix normalized;  // filled by normalize()

    int index_of(const std::string& word) const;
};

// Every vocabulary word is a node; words without qualifying edges stay
// isolated (they keep a self-loop after normalization). G_h gets pairwise
// edges among heads sharing a tail in Syn_t (transitivity) and in Ant_t
// (trans-transitivity); G_t mirrors this over Syn_h/Ant_h.
std::pair<AttentiveGraph, AttentiveGraph> build_graphs(const NeighborDicts& dicts,
                                                       const std::vector<PairScore>& scores,
                                                       const std::vector<std::string>& vocabulary,
                                                       const Thresholds& thr = {});

enum class AttentionScheme { A1, A2, A3, A4, A5 };

AttentionScheme parse_scheme(const std::string& name);
std::string scheme_name(AttentionScheme s);

struct AttentionContext {
    EmbeddingTable* table = nullptr;        // A3
    const EncoderParams* params = nullptr;  // A4/A5
    const EncoderConfig* cfg = nullptr;     // A4/A5
    std::uint64_t seed = 0;                 // A1
    double confidence_band = 0.05;          // A5
};

// Weights are hard (never trained). A1: seeded uniform(0.1, 0.9); A2: zero
// adjacency, so the normalized form collapses to I; A3: cosine of raw
// embeddings clamped to [0,1]; A4: cosine of ENC-1 outputs clamped to
// [0,1]; A5: A4 halved on edges whose generating pairs all scored within
// confidence_band of a threshold.
void attach_attention(AttentiveGraph& graph, AttentionScheme scheme, const AttentionContext& ctx);

// normalized = D^{-1/2} (xi + I) D^{-1/2} with D the degree matrix of
// (xi + I); an isolated node's row is [1] at its own position.
void normalize(AttentiveGraph& graph);

// Full Algorithm-1 pipeline given a trained preliminary model.
std::pair<AttentiveGraph, AttentiveGraph> run_graph_construction(
    const std::vector<PairScore>& scores, const std::vector<std::string>& vocabulary,
    AttentionScheme scheme, const AttentionContext& ctx, const Thresholds& thr = {});

// Edge-list text serialization with a node-index header; round-trippable.
void save_graph(const std::string& path, const AttentiveGraph& graph);
AttentiveGraph load_graph(const std::string& path);
void write_graph(std::ostream& os, const AttentiveGraph& graph);
AttentiveGraph read_graph(std::istream& is);

struct GraphStats {
    int node_count = 0;
    int edge_count = 0;
    std::map<int, int> degree_histogram;
    double weight_min = 0, weight_mean = 0, weight_max = 0;
};
GraphStats graph_stats(const AttentiveGraph& graph);

}  // namespace icenet
