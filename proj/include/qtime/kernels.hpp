#pragma once

#include <cstddef>

namespace qtime::kernels {

/// Dense inner-loop kernels used by feature scaling and the regressor's
/// forward/backward passes. Two implementations exist: a scalar reference
/// (the semantic definition) and an AVX2+FMA variant selected at runtime.
/// Both are deterministic; the AVX2 variant may differ from the scalar one in
/// final-ulp rounding of reductions, and the equivalence tests bound that
/// difference. Set QTIME_NO_SIMD=1 to force the scalar path.
struct KernelTable {
    double (*dot)(const double* x, const double* y, size_t n);
    // y += a * x
    void (*axpy)(double* y, double a, const double* x, size_t n);
    // y += x
    void (*add)(double* y, const double* x, size_t n);
    // x *= a
    void (*scale)(double* x, double a, size_t n);
    // x = max(x, 0)
    void (*relu)(double* x, size_t n);
    // g = pre > 0 ? g : 0
    void (*relu_backward)(double* g, const double* pre, size_t n);
    // C (m x n) += A (m x k) * B (k x n), all row-major
    void (*gemm_acc)(double* c, const double* a, const double* b, size_t m, size_t k, size_t n);
    // C (k x n) += A^T * B with A (m x k), B (m x n); the dW = X^T * dY shape
    void (*gemm_acc_at_b)(double* c, const double* a, const double* b, size_t m, size_t k,
                          size_t n);
    // C (m x k) += A * B^T with A (m x n), B (k x n); the dX = dY * W^T shape
    void (*gemm_acc_a_bt)(double* c, const double* a, const double* b, size_t m, size_t n,
                          size_t k);
    const char* name;
};

/// Scalar reference kernels; always available.
const KernelTable& scalar_table();

/// AVX2+FMA kernels, or nullptr when unsupported by the build or the CPU.
const KernelTable* avx2_table();

/// The runtime-selected table (AVX2 when available, else scalar). Resolved
/// once on first use.
const KernelTable& active_table();

inline double dot(const double* x, const double* y, size_t n) {
    return active_table().dot(x, y, n);
}
inline void axpy(double* y, double a, const double* x, size_t n) {
    active_table().axpy(y, a, x, n);
}
inline void add(double* y, const double* x, size_t n) { active_table().add(y, x, n); }
inline void scale(double* x, double a, size_t n) { active_table().scale(x, a, n); }
inline void relu(double* x, size_t n) { active_table().relu(x, n); }
inline void relu_backward(double* g, const double* pre, size_t n) {
    active_table().relu_backward(g, pre, n);
}
inline void gemm_acc(double* c, const double* a, const double* b, size_t m, size_t k, size_t n) {
    active_table().gemm_acc(c, a, b, m, k, n);
}
inline void gemm_acc_at_b(double* c, const double* a, const double* b, size_t m, size_t k,
                          size_t n) {
    active_table().gemm_acc_at_b(c, a, b, m, k, n);
}
inline void gemm_acc_a_bt(double* c, const double* a, const double* b, size_t m, size_t n,
                          size_t k) {
    active_table().gemm_acc_a_bt(c, a, b, m, n, k);
}

}  // namespace qtime::kernels
