#pragma once

// ENC-3: two-layer attentive graph convolution over the head/tail graphs,
// the four cosine score features, and the softmax classifier.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "icenet/ad.hpp"

namespace icenet {

struct GcnConfig {
    int p = 80;       // input width (encoder output)
    int hidden = 70;  // first convolution layer width
    int q = 60;       // output width

    void validate() const {
        if (p <= 0 || hidden <= 0 || q <= 0) throw ConfigError("gcn dimensions must be positive");
    }
};

struct GcnParams {
    ad::Var W_hh1, W_hh2, W_ht1, W_ht2, W_th1, W_th2, W_tt1, W_tt2;
    ad::Var w;  // classifier, 2 x 4
    ad::Var b;  // classifier bias, 1 x 2

    std::vector<ad::Var> all() const {
        return {W_hh1, W_hh2, W_ht1, W_ht2, W_th1, W_th2, W_tt1, W_tt2, w, b};
    }
    std::vector<std::pair<std::string, ad::Var>> named() const;
};

GcnParams init_gcn(const GcnConfig& cfg, std::mt19937_64& rng);

struct GcnOutputs {
    ad::Var x_hh, x_ht, x_th, x_tt;  // node representation matrices, |V| x q
};

// One representation per (graph, encoder) pairing:
//   (G_h, f1) -> X_hh, (G_t, f1) -> X_ht, (G_h, f2) -> X_th, (G_t, f2) -> X_tt
// each computed as adj . (ReLU(adj . F . W1)) . W2 with adj held constant.
GcnOutputs gcn_forward(ad::Tape& tape, ad::Var f1_nodes, ad::Var f2_nodes,
                       const ad::CsrMatrix& adj_h, const ad::CsrMatrix& adj_t,
                       const GcnParams& params);

// The four cosine features per pair: rows of hh/th are indexed by the head
// word, rows of ht/tt by the tail word. x1 = cos(th, tt), x2 = cos(hh, ht),
// x3 = cos(hh, tt), x4 = cos(ht, th). Returns n x 4.
ad::Var eq5_features(ad::Tape& tape, ad::Var hh, ad::Var ht, ad::Var th, ad::Var tt);

// Features for pairs against GCN node representations.
ad::Var pair_features(ad::Tape& tape, const GcnOutputs& reps, const std::vector<int>& head_idx,
                      const std::vector<int>& tail_idx);

// logits = features . w^T + b
ad::Var classify_logits(ad::Tape& tape, ad::Var features, const GcnParams& params);

struct Prediction {
    double p_synonym, p_antonym;
    int label;  // 0 = synonym, 1 = antonym; ties break toward synonym
};
std::vector<Prediction> predictions_from_logits(const ad::Var& logits);

// Mean negative log-likelihood (labels: 0 = synonym, 1 = antonym).
ad::Var loss_l3(ad::Tape& tape, ad::Var logits, std::vector<int> labels);

}  // namespace icenet
