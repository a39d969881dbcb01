#include "qtime/kernels.hpp"

namespace qtime::kernels {
namespace {

double dot_scalar(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double* y, double a, const double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scalar(double* y, const double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += x[i];
}

void scale_scalar(double* x, double a, size_t n) {
    for (size_t i = 0; i < n; ++i) x[i] *= a;
}

void relu_scalar(double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        if (x[i] < 0.0) x[i] = 0.0;
    }
}

void relu_backward_scalar(double* g, const double* pre, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        if (pre[i] <= 0.0) g[i] = 0.0;
    }
}

void gemm_acc_scalar(double* c, const double* a, const double* b, size_t m, size_t k, size_t n) {
    for (size_t l = 0; l < k; ++l) {
        const double* brow = b + l * n;
        for (size_t r = 0; r < m; ++r) {
            axpy_scalar(c + r * n, a[r * k + l], brow, n);
        }
    }
}

void gemm_acc_at_b_scalar(double* c, const double* a, const double* b, size_t m, size_t k,
                          size_t n) {
    for (size_t r = 0; r < m; ++r) {
        const double* brow = b + r * n;
        for (size_t l = 0; l < k; ++l) {
            axpy_scalar(c + l * n, a[r * k + l], brow, n);
        }
    }
}

void gemm_acc_a_bt_scalar(double* c, const double* a, const double* b, size_t m, size_t n,
                          size_t k) {
    for (size_t r = 0; r < m; ++r) {
        const double* arow = a + r * n;
        for (size_t l = 0; l < k; ++l) {
            c[r * k + l] += dot_scalar(arow, b + l * n, n);
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar,
                                   axpy_scalar,
                                   add_scalar,
                                   scale_scalar,
                                   relu_scalar,
                                   relu_backward_scalar,
                                   gemm_acc_scalar,
                                   gemm_acc_at_b_scalar,
                                   gemm_acc_a_bt_scalar,
                                   "scalar"};
    return table;
}

}  // namespace qtime::kernels
