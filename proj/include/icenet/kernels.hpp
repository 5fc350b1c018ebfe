#pragma once

// Dense inner-loop kernels used by the autodiff core. A scalar reference
// implementation is always available; an AVX2 variant (and NEON on aarch64)
// is selected at runtime when the CPU supports it. The variants are
// equivalence-tested against the scalar reference.

#include <cstddef>
#include <string>

namespace icenet::kernels {

struct Ops {
    // dot(x, y) over n elements
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x *= a
    void (*scale)(double a, double* x, std::size_t n);
    // y = max(x, 0)
    void (*relu)(const double* x, double* y, std::size_t n);
    // gx += g where x > 0
    void (*relu_grad)(const double* x, const double* g, double* gx, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();

bool simd_supported();
const Ops& simd_ops();  // valid only when simd_supported()

// Active implementation. Honors the ICENET_KERNELS environment variable
// ("scalar", "simd", "auto"); defaults to the best supported variant.
const Ops& active_ops();

// Row-major GEMM built on the active kernels:
//   C = alpha * op(A) * op(B) + beta * C   (beta must be 0 or 1)
// op(A) is m x k, op(B) is k x n, C is m x n.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
          const double* a, const double* b, double beta, double* c);

}  // namespace icenet::kernels
