// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma in its own TU; only
// reached through the dispatch table after a runtime CPU check.

#include <immintrin.h>

#include "qtime/kernels.hpp"

namespace qtime::kernels {
namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, size_t n) {
    size_t i = 0;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_avx2(double* y, double a, const double* x, size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        __m256d y1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void add_avx2(double* y, const double* x, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] += x[i];
}

void scale_avx2(double* x, double a, size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

void relu_avx2(double* x, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) {
        if (x[i] < 0.0) x[i] = 0.0;
    }
}

void relu_backward_avx2(double* g, const double* pre, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(g + i, _mm256_and_pd(mask, _mm256_loadu_pd(g + i)));
    }
    for (; i < n; ++i) {
        if (pre[i] <= 0.0) g[i] = 0.0;
    }
}

// C (m x n) += A (m x k) * B (k x n). Register tile: 2 C rows x 8 columns,
// accumulated across all of k before storing, so C traffic is paid once.
void gemm_acc_avx2(double* c, const double* a, const double* b, size_t m, size_t k, size_t n) {
    size_t r = 0;
    for (; r + 2 <= m; r += 2) {
        const double* a0 = a + r * k;
        const double* a1 = a0 + k;
        double* c0 = c + r * n;
        double* c1 = c0 + n;
        size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            __m256d acc00 = _mm256_loadu_pd(c0 + j);
            __m256d acc01 = _mm256_loadu_pd(c0 + j + 4);
            __m256d acc10 = _mm256_loadu_pd(c1 + j);
            __m256d acc11 = _mm256_loadu_pd(c1 + j + 4);
            const double* bp = b + j;
            for (size_t l = 0; l < k; ++l, bp += n) {
                __m256d b0 = _mm256_loadu_pd(bp);
                __m256d b1 = _mm256_loadu_pd(bp + 4);
                __m256d av0 = _mm256_set1_pd(a0[l]);
                __m256d av1 = _mm256_set1_pd(a1[l]);
                acc00 = _mm256_fmadd_pd(av0, b0, acc00);
                acc01 = _mm256_fmadd_pd(av0, b1, acc01);
                acc10 = _mm256_fmadd_pd(av1, b0, acc10);
                acc11 = _mm256_fmadd_pd(av1, b1, acc11);
            }
            _mm256_storeu_pd(c0 + j, acc00);
            _mm256_storeu_pd(c0 + j + 4, acc01);
            _mm256_storeu_pd(c1 + j, acc10);
            _mm256_storeu_pd(c1 + j + 4, acc11);
        }
        for (; j < n; ++j) {
            double s0 = c0[j], s1 = c1[j];
            for (size_t l = 0; l < k; ++l) {
                s0 += a0[l] * b[l * n + j];
                s1 += a1[l] * b[l * n + j];
            }
            c0[j] = s0;
            c1[j] = s1;
        }
    }
    if (r < m) {
        const double* a0 = a + r * k;
        double* c0 = c + r * n;
        size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            __m256d acc0 = _mm256_loadu_pd(c0 + j);
            __m256d acc1 = _mm256_loadu_pd(c0 + j + 4);
            const double* bp = b + j;
            for (size_t l = 0; l < k; ++l, bp += n) {
                __m256d av = _mm256_set1_pd(a0[l]);
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp), acc0);
                acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp + 4), acc1);
            }
            _mm256_storeu_pd(c0 + j, acc0);
            _mm256_storeu_pd(c0 + j + 4, acc1);
        }
        for (; j < n; ++j) {
            double s = c0[j];
            for (size_t l = 0; l < k; ++l) s += a0[l] * b[l * n + j];
            c0[j] = s;
        }
    }
}

// C (k x n) += A^T * B with A (m x k), B (m x n). Tile: 2 C rows x 8 columns,
// accumulated across all of m (small: the node count) before storing.
void gemm_acc_at_b_avx2(double* c, const double* a, const double* b, size_t m, size_t k,
                        size_t n) {
    size_t l = 0;
    for (; l + 2 <= k; l += 2) {
        double* c0 = c + l * n;
        double* c1 = c0 + n;
        size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            __m256d acc00 = _mm256_loadu_pd(c0 + j);
            __m256d acc01 = _mm256_loadu_pd(c0 + j + 4);
            __m256d acc10 = _mm256_loadu_pd(c1 + j);
            __m256d acc11 = _mm256_loadu_pd(c1 + j + 4);
            for (size_t r = 0; r < m; ++r) {
                const double* brow = b + r * n + j;
                __m256d b0 = _mm256_loadu_pd(brow);
                __m256d b1 = _mm256_loadu_pd(brow + 4);
                __m256d av0 = _mm256_set1_pd(a[r * k + l]);
                __m256d av1 = _mm256_set1_pd(a[r * k + l + 1]);
                acc00 = _mm256_fmadd_pd(av0, b0, acc00);
                acc01 = _mm256_fmadd_pd(av0, b1, acc01);
                acc10 = _mm256_fmadd_pd(av1, b0, acc10);
                acc11 = _mm256_fmadd_pd(av1, b1, acc11);
            }
            _mm256_storeu_pd(c0 + j, acc00);
            _mm256_storeu_pd(c0 + j + 4, acc01);
            _mm256_storeu_pd(c1 + j, acc10);
            _mm256_storeu_pd(c1 + j + 4, acc11);
        }
        for (; j < n; ++j) {
            double s0 = c0[j], s1 = c1[j];
            for (size_t r = 0; r < m; ++r) {
                s0 += a[r * k + l] * b[r * n + j];
                s1 += a[r * k + l + 1] * b[r * n + j];
            }
            c0[j] = s0;
            c1[j] = s1;
        }
    }
    if (l < k) {
        double* c0 = c + l * n;
        size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            __m256d acc0 = _mm256_loadu_pd(c0 + j);
            __m256d acc1 = _mm256_loadu_pd(c0 + j + 4);
            for (size_t r = 0; r < m; ++r) {
                const double* brow = b + r * n + j;
                __m256d av = _mm256_set1_pd(a[r * k + l]);
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), acc0);
                acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), acc1);
            }
            _mm256_storeu_pd(c0 + j, acc0);
            _mm256_storeu_pd(c0 + j + 4, acc1);
        }
        for (; j < n; ++j) {
            double s = c0[j];
            for (size_t r = 0; r < m; ++r) s += a[r * k + l] * b[r * n + j];
            c0[j] = s;
        }
    }
}

// C (m x k) += A * B^T with A (m x n), B (k x n): each C entry is a dot
// product; four B rows share one pass over the A row.
void gemm_acc_a_bt_avx2(double* c, const double* a, const double* b, size_t m, size_t n,
                        size_t k) {
    for (size_t r = 0; r < m; ++r) {
        const double* ar = a + r * n;
        double* crow = c + r * k;
        size_t l = 0;
        for (; l + 4 <= k; l += 4) {
            const double* b0 = b + l * n;
            const double* b1 = b0 + n;
            const double* b2 = b1 + n;
            const double* b3 = b2 + n;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            __m256d acc2 = _mm256_setzero_pd();
            __m256d acc3 = _mm256_setzero_pd();
            size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d av = _mm256_loadu_pd(ar + j);
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + j), acc0);
                acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + j), acc1);
                acc2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b2 + j), acc2);
                acc3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b3 + j), acc3);
            }
            double s0 = hsum4(acc0), s1 = hsum4(acc1), s2 = hsum4(acc2), s3 = hsum4(acc3);
            for (; j < n; ++j) {
                s0 += ar[j] * b0[j];
                s1 += ar[j] * b1[j];
                s2 += ar[j] * b2[j];
                s3 += ar[j] * b3[j];
            }
            crow[l] += s0;
            crow[l + 1] += s1;
            crow[l + 2] += s2;
            crow[l + 3] += s3;
        }
        for (; l < k; ++l) crow[l] += dot_avx2(ar, b + l * n, n);
    }
}

}  // namespace

const KernelTable* avx2_table_impl() {
    static const KernelTable table{dot_avx2,
                                   axpy_avx2,
                                   add_avx2,
                                   scale_avx2,
                                   relu_avx2,
                                   relu_backward_avx2,
                                   gemm_acc_avx2,
                                   gemm_acc_at_b_avx2,
                                   gemm_acc_a_bt_avx2,
                                   "avx2"};
    return &table;
}

}  // namespace qtime::kernels
