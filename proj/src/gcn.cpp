#include "icenet/gcn.hpp"

#include "icenet/encoders.hpp"

namespace icenet {

using ad::Tape;
using ad::Var;

std::vector<std::pair<std::string, Var>> GcnParams::named() const {
    return {{"W_hh1", W_hh1}, {"W_hh2", W_hh2}, {"W_ht1", W_ht1}, {"W_ht2", W_ht2},
            {"W_th1", W_th1}, {"W_th2", W_th2}, {"W_tt1", W_tt1}, {"W_tt2", W_tt2},
            {"w", w},         {"b", b}};
}

GcnParams init_gcn(const GcnConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    GcnParams g;
    g.W_hh1 = glorot(cfg.hidden, cfg.p, rng);
    g.W_hh2 = glorot(cfg.q, cfg.hidden, rng);
    g.W_ht1 = glorot(cfg.hidden, cfg.p, rng);
    g.W_ht2 = glorot(cfg.q, cfg.hidden, rng);
    g.W_th1 = glorot(cfg.hidden, cfg.p, rng);
    g.W_th2 = glorot(cfg.q, cfg.hidden, rng);
    g.W_tt1 = glorot(cfg.hidden, cfg.p, rng);
    g.W_tt2 = glorot(cfg.q, cfg.hidden, rng);
    g.w = glorot(2, 4, rng);
    g.b = ad::leaf(1, 2, {0.0, 0.0}, true);
    return g;
}

static Var conv2(Tape& tape, const ad::CsrMatrix& adj, Var features, Var w1, Var w2) {
    Var h = tape.activation(tape.linear(tape.spmm(adj, features), w1), ad::Act::Relu);
    return tape.linear(tape.spmm(adj, h), w2);
}

GcnOutputs gcn_forward(Tape& tape, Var f1_nodes, Var f2_nodes, const ad::CsrMatrix& adj_h,
                       const ad::CsrMatrix& adj_t, const GcnParams& params) {
    if (f1_nodes->rows != adj_h.n || f2_nodes->rows != adj_h.n || adj_h.n != adj_t.n)
        throw DimensionError("gcn_forward: node count mismatch, features " +
                             f1_nodes->shape_str() + " vs graphs " + std::to_string(adj_h.n) +
                             "/" + std::to_string(adj_t.n));
    GcnOutputs out;
    out.x_hh = conv2(tape, adj_h, f1_nodes, params.W_hh1, params.W_hh2);
    out.x_ht = conv2(tape, adj_t, f1_nodes, params.W_ht1, params.W_ht2);
    out.x_th = conv2(tape, adj_h, f2_nodes, params.W_th1, params.W_th2);
    out.x_tt = conv2(tape, adj_t, f2_nodes, params.W_tt1, params.W_tt2);
    return out;
}

Var eq5_features(Tape& tape, Var hh, Var ht, Var th, Var tt) {
    Var x1 = tape.cosine_rows(th, tt);
    Var x2 = tape.cosine_rows(hh, ht);
    Var x3 = tape.cosine_rows(hh, tt);
    Var x4 = tape.cosine_rows(ht, th);
    return tape.concat_cols({x1, x2, x3, x4});
}

Var pair_features(Tape& tape, const GcnOutputs& reps, const std::vector<int>& head_idx,
                  const std::vector<int>& tail_idx) {
    Var hh = tape.gather_rows(reps.x_hh, head_idx);
    Var ht = tape.gather_rows(reps.x_ht, tail_idx);
    Var th = tape.gather_rows(reps.x_th, head_idx);
    Var tt = tape.gather_rows(reps.x_tt, tail_idx);
    return eq5_features(tape, hh, ht, th, tt);
}

Var classify_logits(Tape& tape, Var features, const GcnParams& params) {
    return tape.linear(features, params.w, params.b);
}

std::vector<Prediction> predictions_from_logits(const Var& logits) {
    auto probs = ad::softmax_rows(logits->val, logits->rows, logits->cols);
    std::vector<Prediction> out(logits->rows);
    for (int i = 0; i < logits->rows; ++i) {
        double ps = probs[2 * static_cast<std::size_t>(i)];
        double pa = probs[2 * static_cast<std::size_t>(i) + 1];
        out[i] = {ps, pa, pa > ps ? 1 : 0};
    }
    return out;
}

Var loss_l3(Tape& tape, Var logits, std::vector<int> labels) {
    return tape.softmax_xent(logits, std::move(labels));
}

}  // namespace icenet
