#include "icenet/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace icenet::kernels {

#if !defined(__x86_64__) && !defined(_M_X64) && !defined(__aarch64__)
bool simd_supported() { return false; }
const Ops& simd_ops() { return scalar_ops(); }
#endif

const Ops& active_ops() {
    static const Ops* selected = [] {
        const char* env = std::getenv("ICENET_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (env && std::strcmp(env, "simd") == 0) return &simd_ops();
        return simd_supported() ? &simd_ops() : &scalar_ops();
    }();
    return *selected;
}

void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
          const double* a, const double* b, double beta, double* c) {
    assert(beta == 0.0 || beta == 1.0);
    const Ops& ops = active_ops();
    if (beta == 0.0) std::memset(c, 0, sizeof(double) * static_cast<std::size_t>(m) * n);

    if (!trans_a && !trans_b) {
        // A: m x k, B: k x n
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < k; ++l)
                ops.axpy(alpha * a[static_cast<std::size_t>(i) * k + l],
                         b + static_cast<std::size_t>(l) * n,
                         c + static_cast<std::size_t>(i) * n, n);
    } else if (!trans_a && trans_b) {
        // A: m x k, B stored n x k
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                c[static_cast<std::size_t>(i) * n + j] +=
                    alpha * ops.dot(a + static_cast<std::size_t>(i) * k,
                                    b + static_cast<std::size_t>(j) * k, k);
    } else if (trans_a && !trans_b) {
        // A stored k x m, B: k x n
        for (int l = 0; l < k; ++l)
            for (int i = 0; i < m; ++i)
                ops.axpy(alpha * a[static_cast<std::size_t>(l) * m + i],
                         b + static_cast<std::size_t>(l) * n,
                         c + static_cast<std::size_t>(i) * n, n);
    } else {
        // A stored k x m, B stored n x k
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < k; ++l)
                    acc += a[static_cast<std::size_t>(l) * m + i] *
                           b[static_cast<std::size_t>(j) * k + l];
                c[static_cast<std::size_t>(i) * n + j] += alpha * acc;
            }
    }
}

}  // namespace icenet::kernels
