#include "icenet/encoders.hpp"

#include <cmath>

namespace icenet {

using ad::Tape;
using ad::Var;

std::vector<std::pair<std::string, Var>> EncoderParams::named() const {
    return {{"W11", W11}, {"b11", b11}, {"W12", W12}, {"b12", b12},
            {"W21", W21}, {"b21", b21}, {"W22", W22}, {"b22", b22}};
}

Var glorot(int rows, int cols, std::mt19937_64& rng) {
    double bound = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (auto& x : v) x = dist(rng);
    return ad::leaf(rows, cols, std::move(v), true);
}

static Var zero_bias(int n) {
    return ad::leaf(1, n, std::vector<double>(n, 0.0), true);
}

EncoderParams init_encoders(const EncoderConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    EncoderParams p;
    p.W11 = glorot(cfg.hidden, cfg.d, rng);
    p.b11 = zero_bias(cfg.hidden);
    p.W12 = glorot(cfg.p, cfg.hidden, rng);
    p.b12 = zero_bias(cfg.p);
    p.W21 = glorot(cfg.hidden, cfg.d, rng);
    p.b21 = zero_bias(cfg.hidden);
    p.W22 = glorot(cfg.p, cfg.hidden, rng);
    p.b22 = zero_bias(cfg.p);
    return p;
}

static Var two_layer(Tape& tape, Var x, Var w1, Var b1, Var w2, Var b2, ad::Act sigma) {
    Var h = tape.activation(tape.linear(x, w1, b1), sigma);
    return tape.activation(tape.linear(h, w2, b2), sigma);
}

Var encode_f1(Tape& tape, Var x, const EncoderParams& params, const EncoderConfig& cfg) {
    if (x->cols != cfg.d)
        throw DimensionError("f1: input " + x->shape_str() + ", expected width " +
                             std::to_string(cfg.d));
    return two_layer(tape, x, params.W11, params.b11, params.W12, params.b12, cfg.sigma);
}

Var encode_f2(Tape& tape, Var x, const EncoderParams& params, const EncoderConfig& cfg) {
    if (x->cols != cfg.d)
        throw DimensionError("f2: input " + x->shape_str() + ", expected width " +
                             std::to_string(cfg.d));
    return two_layer(tape, x, params.W21, params.b21, params.W22, params.b22, cfg.sigma);
}

Var synonym_scores(Tape& tape, Var heads, Var tails, const EncoderParams& params,
                   const EncoderConfig& cfg) {
    Var s = tape.row_dot(encode_f1(tape, heads, params, cfg), encode_f1(tape, tails, params, cfg));
    return tape.activation(s, ad::Act::Tanh);
}

Var antonym_scores(Tape& tape, Var heads, Var tails, const EncoderParams& params,
                   const EncoderConfig& cfg) {
    Var s = tape.row_dot(encode_f2(tape, heads, params, cfg), encode_f1(tape, tails, params, cfg));
    return tape.activation(s, ad::Act::Tanh);
}

static Var margin_loss(Tape& tape, Var pos_scores, Var neg_scores, double gamma) {
    Var loss = tape.hinge_sum(pos_scores, gamma, -1);
    if (neg_scores) loss = tape.add(loss, tape.hinge_sum(neg_scores, gamma, +1));
    return loss;
}

Var loss_l1(Tape& tape, Var pos_heads, Var pos_tails, Var neg_heads, Var neg_tails,
            const EncoderParams& params, const EncoderConfig& cfg) {
    if (!pos_heads || pos_heads->rows == 0) throw ContractError("loss_l1: empty positives");
    Var pos = synonym_scores(tape, pos_heads, pos_tails, params, cfg);
    Var neg = neg_heads ? synonym_scores(tape, neg_heads, neg_tails, params, cfg) : nullptr;
    return margin_loss(tape, pos, neg, cfg.gamma1);
}

Var loss_l2(Tape& tape, Var pos_heads, Var pos_tails, Var neg_heads, Var neg_tails,
            const EncoderParams& params, const EncoderConfig& cfg) {
    if (!pos_heads || pos_heads->rows == 0) throw ContractError("loss_l2: empty positives");
    Var pos = antonym_scores(tape, pos_heads, pos_tails, params, cfg);
    Var neg = neg_heads ? antonym_scores(tape, neg_heads, neg_tails, params, cfg) : nullptr;
    return margin_loss(tape, pos, neg, cfg.gamma2);
}

}  // namespace icenet
