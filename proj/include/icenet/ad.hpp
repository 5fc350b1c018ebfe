#pragma once

// Minimal reverse-mode autodiff over dense row-major matrices. Operations
// are recorded on a Tape; backward() replays adjoints in reverse recording
// order, which makes gradient computation deterministic. Repeated backward
// calls accumulate into leaf (parameter) gradients; use zero_grad between
// optimizer steps.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "icenet/errors.hpp"

namespace icenet::ad {

enum class Act { Sigmoid, Tanh, Relu };

// Symmetric sparse matrix in CSR form. spmm treats entries as constants
// (no gradient flows into them) and relies on symmetry for the backward
// product.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    static CsrMatrix from_triplets(int n, std::vector<std::tuple<int, int, double>> entries);
    std::vector<double> multiply(const std::vector<double>& x, int cols) const;
    std::vector<double> dense() const;
};

class Tape;

class Node {
public:
    Node(int r, int c, bool rg)
        : rows(r), cols(c),
          val(static_cast<std::size_t>(r) * c, 0.0),
          grad(static_cast<std::size_t>(r) * c, 0.0),
          requires_grad(rg) {}

    int rows, cols;
    std::vector<double> val;
    std::vector<double> grad;
    bool requires_grad;
    std::function<void()> backprop;  // empty for leaves

    std::size_t size() const { return val.size(); }
    double& v(int i, int j) { return val[static_cast<std::size_t>(i) * cols + j]; }
    double v(int i, int j) const { return val[static_cast<std::size_t>(i) * cols + j]; }
    double scalar() const { return val[0]; }
    std::string shape_str() const;
};

using Var = std::shared_ptr<Node>;

// Leaves live outside any tape; parameters persist across forward passes.
Var leaf(int rows, int cols, std::vector<double> values, bool requires_grad);
Var scalar_leaf(double value, bool requires_grad = false);

class Tape {
public:
    // Each op's backprop closure holds a shared_ptr to its own node; clear
    // the closures here so that cycle doesn't keep nodes alive forever.
    ~Tape() {
        for (auto& n : ops_) n->backprop = nullptr;
    }

    // a: m x k, b: k x n
    Var matmul(Var a, Var b);
    // y = x . w^T (+ bias broadcast over rows); x: n x in, w: out x in, bias: 1 x out
    Var linear(Var x, Var w, Var bias = nullptr);
    Var activation(Var x, Act kind);
    // row-wise inner products of two n x p matrices -> n x 1
    Var row_dot(Var a, Var b);
    // sum_i max(0, gamma + sign * s_i); s: n x 1, sign is +1 or -1
    Var hinge_sum(Var s, double gamma, int sign);
    Var add(Var a, Var b);
    Var scale(Var x, double a);
    Var sum(Var x);
    // y = adj . x with adj held constant; adj must be symmetric
    Var spmm(const CsrMatrix& adj, Var x);
    Var gather_rows(Var x, std::vector<int> indices);
    // row-wise cosine of two n x p matrices -> n x 1; zero-norm rows give 0
    // and bump zero_norm_warnings
    Var cosine_rows(Var a, Var b);
    Var concat_cols(const std::vector<Var>& columns);
    // mean negative log-likelihood of softmax(logits) at labels; logits n x c
    Var softmax_xent(Var logits, std::vector<int> labels);

    // Populates gradients of every requires-grad ancestor of loss.
    void backward(const Var& loss);

    int zero_norm_warnings = 0;

private:
    Var record(Var node) {
        ops_.push_back(node);
        return node;
    }
    std::vector<Var> ops_;
};

// tanh of the inner product of two equal-length vectors (1 x p). Symmetric
// in its arguments.
Var inner_tanh_score(Tape& tape, Var u, Var v);

// Softmax probabilities per row, plain function (no tape).
std::vector<double> softmax_rows(const std::vector<double>& logits, int rows, int cols);

}  // namespace icenet::ad
