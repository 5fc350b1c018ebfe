#include "icenet/ad.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <tuple>

#include "icenet/kernels.hpp"

namespace icenet::ad {

namespace k = icenet::kernels;

std::string Node::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

static void check_same_shape(const Var& a, const Var& b, const char* op) {
    if (a->rows != b->rows || a->cols != b->cols)
        throw DimensionError(std::string(op) + ": shape mismatch " + a->shape_str() +
                             " vs " + b->shape_str());
}

Var leaf(int rows, int cols, std::vector<double> values, bool requires_grad) {
    auto n = std::make_shared<Node>(rows, cols, requires_grad);
    if (values.size() != n->size())
        throw DimensionError("leaf: " + std::to_string(values.size()) + " values for shape " +
                             n->shape_str());
    n->val = std::move(values);
    return n;
}

Var scalar_leaf(double value, bool requires_grad) {
    return leaf(1, 1, {value}, requires_grad);
}

// ---------------------------------------------------------------------------
// CsrMatrix

CsrMatrix CsrMatrix::from_triplets(int n, std::vector<std::tuple<int, int, double>> entries) {
    std::sort(entries.begin(), entries.end());
    CsrMatrix m;
    m.n = n;
    m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (auto& [r, c, v] : entries) ++m.row_ptr[static_cast<std::size_t>(r) + 1];
    for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    m.col.resize(entries.size());
    m.val.resize(entries.size());
    std::size_t i = 0;
    for (auto& [r, c, v] : entries) {
        m.col[i] = c;
        m.val[i] = v;
        ++i;
    }
    return m;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x, int cols) const {
    std::vector<double> y(static_cast<std::size_t>(n) * cols, 0.0);
    const auto& ops = k::active_ops();
    for (int i = 0; i < n; ++i)
        for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
            ops.axpy(val[e], x.data() + static_cast<std::size_t>(col[e]) * cols,
                     y.data() + static_cast<std::size_t>(i) * cols, cols);
    return y;
}

std::vector<double> CsrMatrix::dense() const {
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
            d[static_cast<std::size_t>(i) * n + col[e]] = val[e];
    return d;
}

// ---------------------------------------------------------------------------
// Tape operations

Var Tape::matmul(Var a, Var b) {
    if (a->cols != b->rows)
        throw DimensionError("matmul: inner dimensions disagree, " + a->shape_str() + " x " +
                             b->shape_str());
    auto out = std::make_shared<Node>(a->rows, b->cols, a->requires_grad || b->requires_grad);
    k::gemm(false, false, a->rows, b->cols, a->cols, 1.0, a->val.data(), b->val.data(), 0.0,
            out->val.data());
    out->backprop = [a, b, out] {
        if (a->requires_grad)
            k::gemm(false, true, a->rows, a->cols, b->cols, 1.0, out->grad.data(), b->val.data(),
                    1.0, a->grad.data());
        if (b->requires_grad)
            k::gemm(true, false, b->rows, b->cols, a->rows, 1.0, a->val.data(), out->grad.data(),
                    1.0, b->grad.data());
    };
    return record(out);
}

Var Tape::linear(Var x, Var w, Var bias) {
    if (x->cols != w->cols)
        throw DimensionError("linear: input width " + x->shape_str() + " vs weight " +
                             w->shape_str());
    if (bias && (bias->rows != 1 || bias->cols != w->rows))
        throw DimensionError("linear: bias " + bias->shape_str() + " vs weight " + w->shape_str());
    const int n = x->rows, out_dim = w->rows, in_dim = w->cols;
    auto out = std::make_shared<Node>(n, out_dim, true);
    k::gemm(false, true, n, out_dim, in_dim, 1.0, x->val.data(), w->val.data(), 0.0,
            out->val.data());
    if (bias) {
        const auto& ops = k::active_ops();
        for (int i = 0; i < n; ++i)
            ops.axpy(1.0, bias->val.data(), out->val.data() + static_cast<std::size_t>(i) * out_dim,
                     out_dim);
    }
    out->backprop = [x, w, bias, out, n, out_dim, in_dim] {
        if (x->requires_grad)
            k::gemm(false, false, n, in_dim, out_dim, 1.0, out->grad.data(), w->val.data(), 1.0,
                    x->grad.data());
        if (w->requires_grad)
            k::gemm(true, false, out_dim, in_dim, n, 1.0, out->grad.data(), x->val.data(), 1.0,
                    w->grad.data());
        if (bias && bias->requires_grad) {
            const auto& ops = k::active_ops();
            for (int i = 0; i < n; ++i)
                ops.axpy(1.0, out->grad.data() + static_cast<std::size_t>(i) * out_dim,
                         bias->grad.data(), out_dim);
        }
    };
    return record(out);
}

Var Tape::activation(Var x, Act kind) {
    auto out = std::make_shared<Node>(x->rows, x->cols, x->requires_grad);
    const std::size_t n = x->size();
    switch (kind) {
        case Act::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) out->val[i] = 1.0 / (1.0 + std::exp(-x->val[i]));
            break;
        case Act::Tanh:
            for (std::size_t i = 0; i < n; ++i) out->val[i] = std::tanh(x->val[i]);
            break;
        case Act::Relu:
            k::active_ops().relu(x->val.data(), out->val.data(), n);
            break;
    }
    out->backprop = [x, out, kind, n] {
        if (!x->requires_grad) return;
        switch (kind) {
            case Act::Sigmoid:
                for (std::size_t i = 0; i < n; ++i)
                    x->grad[i] += out->grad[i] * out->val[i] * (1.0 - out->val[i]);
                break;
            case Act::Tanh:
                for (std::size_t i = 0; i < n; ++i)
                    x->grad[i] += out->grad[i] * (1.0 - out->val[i] * out->val[i]);
                break;
            case Act::Relu:
                k::active_ops().relu_grad(x->val.data(), out->grad.data(), x->grad.data(), n);
                break;
        }
    };
    return record(out);
}

Var Tape::row_dot(Var a, Var b) {
    check_same_shape(a, b, "row_dot");
    const int n = a->rows, p = a->cols;
    auto out = std::make_shared<Node>(n, 1, a->requires_grad || b->requires_grad);
    const auto& ops = k::active_ops();
    for (int i = 0; i < n; ++i)
        out->val[i] = ops.dot(a->val.data() + static_cast<std::size_t>(i) * p,
                              b->val.data() + static_cast<std::size_t>(i) * p, p);
    out->backprop = [a, b, out, n, p] {
        const auto& ops = k::active_ops();
        for (int i = 0; i < n; ++i) {
            const std::size_t off = static_cast<std::size_t>(i) * p;
            if (a->requires_grad)
                ops.axpy(out->grad[i], b->val.data() + off, a->grad.data() + off, p);
            if (b->requires_grad)
                ops.axpy(out->grad[i], a->val.data() + off, b->grad.data() + off, p);
        }
    };
    return record(out);
}

Var Tape::hinge_sum(Var s, double gamma, int sign) {
    if (s->cols != 1) throw DimensionError("hinge_sum: expected column vector, got " + s->shape_str());
    const int n = s->rows;
    auto out = std::make_shared<Node>(1, 1, s->requires_grad);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double m = gamma + sign * s->val[i];
        if (m > 0.0) acc += m;
    }
    out->val[0] = acc;
    out->backprop = [s, out, gamma, sign, n] {
        if (!s->requires_grad) return;
        for (int i = 0; i < n; ++i)
            if (gamma + sign * s->val[i] > 0.0) s->grad[i] += sign * out->grad[0];
    };
    return record(out);
}

Var Tape::add(Var a, Var b) {
    check_same_shape(a, b, "add");
    auto out = std::make_shared<Node>(a->rows, a->cols, a->requires_grad || b->requires_grad);
    for (std::size_t i = 0; i < out->size(); ++i) out->val[i] = a->val[i] + b->val[i];
    out->backprop = [a, b, out] {
        const auto& ops = k::active_ops();
        if (a->requires_grad) ops.axpy(1.0, out->grad.data(), a->grad.data(), a->size());
        if (b->requires_grad) ops.axpy(1.0, out->grad.data(), b->grad.data(), b->size());
    };
    return record(out);
}

Var Tape::scale(Var x, double a) {
    auto out = std::make_shared<Node>(x->rows, x->cols, x->requires_grad);
    for (std::size_t i = 0; i < out->size(); ++i) out->val[i] = a * x->val[i];
    out->backprop = [x, out, a] {
        if (x->requires_grad) k::active_ops().axpy(a, out->grad.data(), x->grad.data(), x->size());
    };
    return record(out);
}

Var Tape::sum(Var x) {
    auto out = std::make_shared<Node>(1, 1, x->requires_grad);
    double acc = 0.0;
    for (double v : x->val) acc += v;
    out->val[0] = acc;
    out->backprop = [x, out] {
        if (!x->requires_grad) return;
        for (std::size_t i = 0; i < x->size(); ++i) x->grad[i] += out->grad[0];
    };
    return record(out);
}

Var Tape::spmm(const CsrMatrix& adj, Var x) {
    if (adj.n != x->rows)
        throw DimensionError("spmm: adjacency " + std::to_string(adj.n) + "x" +
                             std::to_string(adj.n) + " vs input " + x->shape_str());
    auto out = std::make_shared<Node>(adj.n, x->cols, x->requires_grad);
    out->val = adj.multiply(x->val, x->cols);
    const CsrMatrix* a = &adj;  // caller keeps the graph alive for the tape's lifetime
    out->backprop = [a, x, out] {
        if (!x->requires_grad) return;
        // adjacency is symmetric, so A^T g = A g
        auto gx = a->multiply(out->grad, x->cols);
        k::active_ops().axpy(1.0, gx.data(), x->grad.data(), x->size());
    };
    return record(out);
}

Var Tape::gather_rows(Var x, std::vector<int> indices) {
    const int n = static_cast<int>(indices.size()), p = x->cols;
    auto out = std::make_shared<Node>(n, p, x->requires_grad);
    for (int i = 0; i < n; ++i)
        std::memcpy(out->val.data() + static_cast<std::size_t>(i) * p,
                    x->val.data() + static_cast<std::size_t>(indices[i]) * p, sizeof(double) * p);
    out->backprop = [x, out, idx = std::move(indices), n, p] {
        if (!x->requires_grad) return;
        const auto& ops = k::active_ops();
        for (int i = 0; i < n; ++i)
            ops.axpy(1.0, out->grad.data() + static_cast<std::size_t>(i) * p,
                     x->grad.data() + static_cast<std::size_t>(idx[i]) * p, p);
    };
    return record(out);
}

Var Tape::cosine_rows(Var a, Var b) {
    check_same_shape(a, b, "cosine_rows");
    const int n = a->rows, p = a->cols;
    auto out = std::make_shared<Node>(n, 1, a->requires_grad || b->requires_grad);
    const auto& ops = k::active_ops();
    auto norms = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        const double* ai = a->val.data() + static_cast<std::size_t>(i) * p;
        const double* bi = b->val.data() + static_cast<std::size_t>(i) * p;
        double na = std::sqrt(ops.dot(ai, ai, p));
        double nb = std::sqrt(ops.dot(bi, bi, p));
        (*norms)[2 * i] = na;
        (*norms)[2 * i + 1] = nb;
        if (na == 0.0 || nb == 0.0) {
            out->val[i] = 0.0;
            ++zero_norm_warnings;
        } else {
            out->val[i] = ops.dot(ai, bi, p) / (na * nb);
        }
    }
    out->backprop = [a, b, out, norms, n, p] {
        const auto& ops = k::active_ops();
        for (int i = 0; i < n; ++i) {
            double na = (*norms)[2 * i], nb = (*norms)[2 * i + 1];
            if (na == 0.0 || nb == 0.0) continue;
            const std::size_t off = static_cast<std::size_t>(i) * p;
            const double* ai = a->val.data() + off;
            const double* bi = b->val.data() + off;
            double c = out->val[i], g = out->grad[i];
            if (a->requires_grad) {
                ops.axpy(g / (na * nb), bi, a->grad.data() + off, p);
                ops.axpy(-g * c / (na * na), ai, a->grad.data() + off, p);
            }
            if (b->requires_grad) {
                ops.axpy(g / (na * nb), ai, b->grad.data() + off, p);
                ops.axpy(-g * c / (nb * nb), bi, b->grad.data() + off, p);
            }
        }
    };
    return record(out);
}

Var Tape::concat_cols(const std::vector<Var>& columns) {
    if (columns.empty()) throw ContractError("concat_cols: empty column list");
    const int n = columns[0]->rows, m = static_cast<int>(columns.size());
    bool rg = false;
    for (const auto& c : columns) {
        if (c->cols != 1 || c->rows != n)
            throw DimensionError("concat_cols: expected " + std::to_string(n) + "x1, got " +
                                 c->shape_str());
        rg = rg || c->requires_grad;
    }
    auto out = std::make_shared<Node>(n, m, rg);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) out->v(i, j) = columns[j]->val[i];
    out->backprop = [cols = columns, out, n, m] {
        for (int j = 0; j < m; ++j) {
            if (!cols[j]->requires_grad) continue;
            for (int i = 0; i < n; ++i) cols[j]->grad[i] += out->grad[static_cast<std::size_t>(i) * m + j];
        }
    };
    return record(out);
}

Var Tape::softmax_xent(Var logits, std::vector<int> labels) {
    const int n = logits->rows, c = logits->cols;
    if (n == 0) throw ContractError("softmax_xent: empty batch");
    if (static_cast<int>(labels.size()) != n)
        throw DimensionError("softmax_xent: " + std::to_string(labels.size()) + " labels for " +
                             logits->shape_str() + " logits");
    auto probs = std::make_shared<std::vector<double>>(softmax_rows(logits->val, n, c));
    auto out = std::make_shared<Node>(1, 1, logits->requires_grad);
    double nll = 0.0;
    for (int i = 0; i < n; ++i)
        nll -= std::log((*probs)[static_cast<std::size_t>(i) * c + labels[i]]);
    out->val[0] = nll / n;
    out->backprop = [logits, out, probs, lab = std::move(labels), n, c] {
        if (!logits->requires_grad) return;
        const double g = out->grad[0] / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < c; ++j) {
                double delta = (j == lab[i]) ? 1.0 : 0.0;
                logits->grad[static_cast<std::size_t>(i) * c + j] +=
                    g * ((*probs)[static_cast<std::size_t>(i) * c + j] - delta);
            }
    };
    return record(out);
}

void Tape::backward(const Var& loss) {
    if (loss->rows != 1 || loss->cols != 1)
        throw ContractError("backward: loss must be scalar, got " + loss->shape_str());
    // Intermediate grads are scoped to this pass; leaf grads accumulate.
    for (auto& n : ops_) std::fill(n->grad.begin(), n->grad.end(), 0.0);
    loss->grad[0] = 1.0;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it)
        if ((*it)->backprop) (*it)->backprop();
}

Var inner_tanh_score(Tape& tape, Var u, Var v) {
    if (u->size() != v->size())
        throw DimensionError("inner_tanh_score: length mismatch " + u->shape_str() + " vs " +
                             v->shape_str());
    return tape.activation(tape.row_dot(u, v), Act::Tanh);
}

std::vector<double> softmax_rows(const std::vector<double>& logits, int rows, int cols) {
    std::vector<double> p(logits.size());
    for (int i = 0; i < rows; ++i) {
        const double* l = logits.data() + static_cast<std::size_t>(i) * cols;
        double* pi = p.data() + static_cast<std::size_t>(i) * cols;
        double m = *std::max_element(l, l + cols);
        double z = 0.0;
        for (int j = 0; j < cols; ++j) z += (pi[j] = std::exp(l[j] - m));
        for (int j = 0; j < cols; ++j) pi[j] /= z;
    }
    return p;
}

}  // namespace icenet::ad
