#pragma once

// ENC-1 and ENC-2: two-layer feed-forward projections from d to p
// dimensions, plus the margin losses L1 and L2. L2 interlaces the encoders:
// the head goes through ENC-2 and the tail through ENC-1, so its gradient
// reaches both parameter sets.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "icenet/ad.hpp"

namespace icenet {

struct EncoderConfig {
    int d = 300;
    int hidden = 150;
    int p = 80;
    ad::Act sigma = ad::Act::Sigmoid;  // hidden/output nonlinearity of f1/f2
    double gamma1 = 0.9;
    double gamma2 = 0.9;

    void validate() const {
        if (d <= 0 || hidden <= 0 || p <= 0)
            throw ConfigError("encoder dimensions must be positive");
        if (gamma1 <= 0.0 || gamma1 > 1.0 || gamma2 <= 0.0 || gamma2 > 1.0)
            throw ConfigError("margins must lie in (0, 1]: scores are tanh-bounded");
    }
};

struct EncoderParams {
    ad::Var W11, b11, W12, b12;  // ENC-1
    ad::Var W21, b21, W22, b22;  // ENC-2

    std::vector<ad::Var> all() const { return {W11, b11, W12, b12, W21, b21, W22, b22}; }
    std::vector<std::pair<std::string, ad::Var>> named() const;
};

// Glorot-uniform weights, zero biases.
EncoderParams init_encoders(const EncoderConfig& cfg, std::mt19937_64& rng);
ad::Var glorot(int rows, int cols, std::mt19937_64& rng);

// f1 / f2 applied to a batch of row vectors (n x d) -> n x p.
ad::Var encode_f1(ad::Tape& tape, ad::Var x, const EncoderParams& params, const EncoderConfig& cfg);
ad::Var encode_f2(ad::Tape& tape, ad::Var x, const EncoderParams& params, const EncoderConfig& cfg);

// Row-wise scores s = tanh(<f1(h), f1(t)>) and tanh(<f2(h), f1(t)>).
ad::Var synonym_scores(ad::Tape& tape, ad::Var heads, ad::Var tails, const EncoderParams& params,
                       const EncoderConfig& cfg);
ad::Var antonym_scores(ad::Tape& tape, ad::Var heads, ad::Var tails, const EncoderParams& params,
                       const EncoderConfig& cfg);

// Margin losses. Positive embeddings must be nonempty; negatives may be
// null. Sums (not means) of the hinge terms, matching the margin semantics.
ad::Var loss_l1(ad::Tape& tape, ad::Var pos_heads, ad::Var pos_tails, ad::Var neg_heads,
                ad::Var neg_tails, const EncoderParams& params, const EncoderConfig& cfg);
ad::Var loss_l2(ad::Tape& tape, ad::Var pos_heads, ad::Var pos_tails, ad::Var neg_heads,
                ad::Var neg_tails, const EncoderParams& params, const EncoderConfig& cfg);

}  // namespace icenet
