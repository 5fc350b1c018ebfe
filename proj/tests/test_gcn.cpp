#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "icenet/gcn.hpp"
#include "icenet/encoders.hpp"
#include "testutil.hpp"

using namespace icenet;
using ad::Tape;
using ad::Var;
using testutil::fd_max_rel_error;
using testutil::random_leaf;

namespace {

GcnConfig small_gcn() { return {4, 3, 3}; }

ad::CsrMatrix identity(int n) {
    std::vector<std::tuple<int, int, double>> t;
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    return ad::CsrMatrix::from_triplets(n, std::move(t));
}

// three-node path, renormalized by hand: diag (1/2, 1/3, 1/2), off 1/sqrt(6)
ad::CsrMatrix path3() {
    double s = 1.0 / std::sqrt(6.0);
    return ad::CsrMatrix::from_triplets(3, {{0, 0, 0.5},
                                            {1, 1, 1.0 / 3.0},
                                            {2, 2, 0.5},
                                            {0, 1, s},
                                            {1, 0, s},
                                            {1, 2, s},
                                            {2, 1, s}});
}

std::vector<double> dense_mm(const std::vector<double>& a, int m, int k,
                             const std::vector<double>& b, int n) {
    std::vector<double> c(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < k; ++l)
            for (int j = 0; j < n; ++j) c[i * n + j] += a[i * k + l] * b[l * n + j];
    return c;
}

std::vector<double> transpose(const std::vector<double>& a, int rows, int cols) {
    std::vector<double> t(a.size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
    return t;
}

}  // namespace

TEST_CASE("identity adjacency reduces the convolution to a two-layer MLP") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(20);
    auto params = init_gcn(cfg, rng);
    const int n = 5;
    Var f1 = random_leaf(n, cfg.p, rng, false);
    Var f2 = random_leaf(n, cfg.p, rng, false);
    auto eye = identity(n);
    Tape tape;
    auto reps = gcn_forward(tape, f1, f2, eye, eye, params);
    Var mlp = tape.linear(tape.activation(tape.linear(f1, params.W_hh1), ad::Act::Relu),
                          params.W_hh2);
    CHECK(reps.x_hh->val == mlp->val);
}

TEST_CASE("zero weights give zero outputs") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(21);
    auto params = init_gcn(cfg, rng);
    for (auto& p : params.all()) std::fill(p->val.begin(), p->val.end(), 0.0);
    Var f = random_leaf(3, cfg.p, rng, false);
    Tape tape;
    auto reps = gcn_forward(tape, f, f, path3(), path3(), params);
    for (double v : reps.x_tt->val) CHECK(v == 0.0);
}

TEST_CASE("three-node propagation matches a dense hand computation") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(22);
    auto params = init_gcn(cfg, rng);
    Var f1 = random_leaf(3, cfg.p, rng, false);
    Var f2 = random_leaf(3, cfg.p, rng, false);
    auto adj = path3();
    Tape tape;
    auto reps = gcn_forward(tape, f1, f2, adj, adj, params);

    auto a = adj.dense();
    // adj . relu(adj . F . W1^T) . W2^T, all dense
    auto layer1 = dense_mm(dense_mm(a, 3, 3, f1->val, cfg.p), 3, cfg.p,
                           transpose(params.W_hh1->val, cfg.hidden, cfg.p), cfg.hidden);
    for (auto& v : layer1) v = std::max(v, 0.0);
    auto expected = dense_mm(dense_mm(a, 3, 3, layer1, cfg.hidden), 3, cfg.hidden,
                             transpose(params.W_hh2->val, cfg.q, cfg.hidden), cfg.q);
    REQUIRE(reps.x_hh->val.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(reps.x_hh->val[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("node count mismatch is a dimension error") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(23);
    auto params = init_gcn(cfg, rng);
    Var f = random_leaf(4, cfg.p, rng, false);
    Tape tape;
    CHECK_THROWS_AS(gcn_forward(tape, f, f, path3(), path3(), params), DimensionError);
}

TEST_CASE("eq5 features are cosines in the documented pairing") {
    std::mt19937_64 rng(24);
    Var hh = random_leaf(6, 5, rng, false), ht = random_leaf(6, 5, rng, false);
    Var th = random_leaf(6, 5, rng, false), tt = random_leaf(6, 5, rng, false);
    Tape tape;
    Var f = eq5_features(tape, hh, ht, th, tt);
    REQUIRE(f->rows == 6);
    REQUIRE(f->cols == 4);
    auto cosine = [](const Var& a, const Var& b, int row) {
        double dot = 0, na = 0, nb = 0;
        for (int j = 0; j < a->cols; ++j) {
            dot += a->v(row, j) * b->v(row, j);
            na += a->v(row, j) * a->v(row, j);
            nb += b->v(row, j) * b->v(row, j);
        }
        return dot / std::sqrt(na * nb);
    };
    for (int i = 0; i < 6; ++i) {
        CHECK(f->v(i, 0) == doctest::Approx(cosine(th, tt, i)).epsilon(1e-12));
        CHECK(f->v(i, 1) == doctest::Approx(cosine(hh, ht, i)).epsilon(1e-12));
        CHECK(f->v(i, 2) == doctest::Approx(cosine(hh, tt, i)).epsilon(1e-12));
        CHECK(f->v(i, 3) == doctest::Approx(cosine(ht, th, i)).epsilon(1e-12));
        for (int j = 0; j < 4; ++j) {
            CHECK(f->v(i, j) >= -1.0);
            CHECK(f->v(i, j) <= 1.0);
        }
    }
}

TEST_CASE("cosine extremes") {
    Tape tape;
    Var a = ad::leaf(2, 2, {1, 2, 1, 0}, false);
    Var b = ad::leaf(2, 2, {2, 4, 0, 3}, false);
    Var c = tape.cosine_rows(a, b);
    CHECK(c->val[0] == doctest::Approx(1.0).epsilon(1e-14));  // parallel
    CHECK(c->val[1] == doctest::Approx(0.0));                  // orthogonal

    Var z = ad::leaf(1, 2, {0, 0}, false);
    Var one = ad::leaf(1, 2, {1, 1}, false);
    CHECK(tape.cosine_rows(z, one)->val[0] == 0.0);
    CHECK(tape.zero_norm_warnings == 1);
}

TEST_CASE("classifier probabilities and tie-breaking") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(25);
    auto params = init_gcn(cfg, rng);
    std::fill(params.w->val.begin(), params.w->val.end(), 0.0);
    std::fill(params.b->val.begin(), params.b->val.end(), 0.0);
    Tape tape;
    Var features = random_leaf(2, 4, rng, false);

    SUBCASE("zero parameters tie toward synonym") {
        auto preds = predictions_from_logits(classify_logits(tape, features, params));
        for (const auto& p : preds) {
            CHECK(p.p_synonym == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(p.p_antonym == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(p.label == 0);
            CHECK(p.p_synonym + p.p_antonym == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("softmax shift invariance") {
        params.b->val = {0.0, std::log(3.0)};
        auto p1 = predictions_from_logits(classify_logits(tape, features, params));
        CHECK(p1[0].p_synonym == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(p1[0].p_antonym == doctest::Approx(0.75).epsilon(1e-12));
        params.b->val = {5.0, std::log(3.0) + 5.0};
        auto p2 = predictions_from_logits(classify_logits(tape, features, params));
        CHECK(p2[0].p_synonym == doctest::Approx(p1[0].p_synonym).epsilon(1e-12));
        CHECK(p2[0].p_antonym == doctest::Approx(p1[0].p_antonym).epsilon(1e-12));
    }
}

TEST_CASE("loss_l3 values") {
    Tape tape;
    SUBCASE("near-perfect predictor") {
        Var logits = ad::leaf(2, 2, {50, -50, -50, 50}, false);
        CHECK(loss_l3(tape, logits, {0, 1})->scalar() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("uniform predictor") {
        Var logits = ad::leaf(2, 2, {0, 0, 0, 0}, false);
        CHECK(loss_l3(tape, logits, {0, 1})->scalar() ==
              doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("two-pair batch with p_true 0.8 and 0.5") {
        Var logits = ad::leaf(2, 2, {std::log(0.8), std::log(0.2), std::log(0.5), std::log(0.5)},
                              false);
        CHECK(loss_l3(tape, logits, {0, 0})->scalar() ==
              doctest::Approx(-(std::log(0.8) + std::log(0.5)) / 2).epsilon(1e-12));
    }
    SUBCASE("empty batch") {
        Var logits = ad::leaf(0, 2, {}, false);
        CHECK_THROWS_AS(loss_l3(tape, logits, {}), ContractError);
    }
}

TEST_CASE("pair features are invariant under node permutation") {
    auto cfg = small_gcn();
    std::mt19937_64 rng(26);
    auto params = init_gcn(cfg, rng);
    const int n = 6;
    Var f1 = random_leaf(n, cfg.p, rng, false);
    Var f2 = random_leaf(n, cfg.p, rng, false);

    std::vector<std::tuple<int, int, double>> trip;
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 0.4);
    trip.emplace_back(0, 3, 0.2);
    trip.emplace_back(3, 0, 0.2);
    trip.emplace_back(2, 5, 0.3);
    trip.emplace_back(5, 2, 0.3);
    auto adj = ad::CsrMatrix::from_triplets(n, trip);

    std::vector<int> heads{0, 2, 4}, tails{3, 5, 1};
    Tape tape;
    auto reps = gcn_forward(tape, f1, f2, adj, adj, params);
    Var base = pair_features(tape, reps, heads, tails);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);  // perm[old] = new
    std::vector<double> p1(f1->val.size()), p2(f2->val.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cfg.p; ++j) {
            p1[perm[i] * cfg.p + j] = f1->v(i, j);
            p2[perm[i] * cfg.p + j] = f2->v(i, j);
        }
    std::vector<std::tuple<int, int, double>> ptrip;
    for (auto [i, j, w] : trip) ptrip.emplace_back(perm[i], perm[j], w);
    auto padj = ad::CsrMatrix::from_triplets(n, std::move(ptrip));
    std::vector<int> pheads, ptails;
    for (int h : heads) pheads.push_back(perm[h]);
    for (int t : tails) ptails.push_back(perm[t]);

    auto preps = gcn_forward(tape, ad::leaf(n, cfg.p, p1, false), ad::leaf(n, cfg.p, p2, false),
                             padj, padj, params);
    Var permuted = pair_features(tape, preps, pheads, ptails);
    REQUIRE(permuted->val.size() == base->val.size());
    for (std::size_t i = 0; i < base->val.size(); ++i)
        CHECK(permuted->val[i] == doctest::Approx(base->val[i]).epsilon(1e-10));
}

TEST_CASE("L3 gradients flow into the GCN and both encoders") {
    EncoderConfig enc_cfg;
    enc_cfg.d = 5;
    enc_cfg.hidden = 4;
    enc_cfg.p = 4;
    GcnConfig gcn_cfg{enc_cfg.p, 3, 3};
    std::mt19937_64 rng(27);
    auto enc = init_encoders(enc_cfg, rng);
    auto gcn = init_gcn(gcn_cfg, rng);
    Var x = random_leaf(3, enc_cfg.d, rng, false);
    auto adj = path3();
    std::vector<int> heads{0, 1}, tails{2, 0};
    std::vector<int> labels{0, 1};
    auto loss = [&](bool bw) {
        Tape t;
        Var f1 = encode_f1(t, x, enc, enc_cfg);
        Var f2 = encode_f2(t, x, enc, enc_cfg);
        auto reps = gcn_forward(t, f1, f2, adj, adj, gcn);
        Var l = loss_l3(t, classify_logits(t, pair_features(t, reps, heads, tails), gcn), labels);
        if (bw) t.backward(l);
        return l->scalar();
    };
    std::vector<ad::Var> params = enc.all();
    auto g = gcn.all();
    params.insert(params.end(), g.begin(), g.end());
    CHECK(fd_max_rel_error(params, loss) < 1e-4);
}
