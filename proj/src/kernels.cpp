#include "deltaiss/kernels.hpp"

#include "deltaiss/error.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define DELTAISS_X86 1
#include <immintrin.h>
#else
#define DELTAISS_X86 0
#endif

#if defined(__aarch64__)
#define DELTAISS_NEON 1
#include <arm_neon.h>
#else
#define DELTAISS_NEON 0
#endif

namespace deltaiss::kernels {

namespace {

// ---------------------------------------------------------------- scalar

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot_scalar(a + i * cols, x, cols);
}

void matvec_add_scalar(const double* a, std::size_t rows, std::size_t cols,
                       const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] += dot_scalar(a + i * cols, x, cols);
}

// C = A B via the i-k-j order: the inner loop is an axpy over a row of B,
// contiguous in memory for row-major storage.
void matmul_scalar(const double* a, std::size_t m, std::size_t k,
                   const double* b, std::size_t n, double* c) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            axpy_scalar(a[i * k + p], b + p * n, ci, n);
        }
    }
}

// ---------------------------------------------------------------- AVX2 + FMA

#if DELTAISS_X86

__attribute__((target("avx2,fma")))
double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc0);
    __m128d hi = _mm256_extractf128_pd(acc0, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2,fma")))
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma")))
void matvec_avx2(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot_avx2(a + i * cols, x, cols);
}

__attribute__((target("avx2,fma")))
void matvec_add_avx2(const double* a, std::size_t rows, std::size_t cols,
                     const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] += dot_avx2(a + i * cols, x, cols);
}

__attribute__((target("avx2,fma")))
void matmul_avx2(const double* a, std::size_t m, std::size_t k,
                 const double* b, std::size_t n, double* c) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            axpy_avx2(a[i * k + p], b + p * n, ci, n);
        }
    }
}

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif // DELTAISS_X86

// ---------------------------------------------------------------- NEON

#if DELTAISS_NEON

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    for (; i + 2 <= n; i += 2) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot_neon(a + i * cols, x, cols);
}

void matvec_add_neon(const double* a, std::size_t rows, std::size_t cols,
                     const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] += dot_neon(a + i * cols, x, cols);
}

void matmul_neon(const double* a, std::size_t m, std::size_t k,
                 const double* b, std::size_t n, double* c) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            axpy_neon(a[i * k + p], b + p * n, ci, n);
        }
    }
}

#endif // DELTAISS_NEON

// ---------------------------------------------------------------- dispatch

struct Dispatch {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
    void (*matvec_add)(const double*, std::size_t, std::size_t, const double*, double*);
    void (*matmul)(const double*, std::size_t, std::size_t, const double*, std::size_t, double*);
};

constexpr Dispatch kScalar{Backend::Scalar, dot_scalar, axpy_scalar,
                           matvec_scalar, matvec_add_scalar, matmul_scalar};

Dispatch make_dispatch(Backend b) {
    switch (b) {
#if DELTAISS_X86
    case Backend::Avx2:
        return {Backend::Avx2, dot_avx2, axpy_avx2, matvec_avx2, matvec_add_avx2, matmul_avx2};
#endif
#if DELTAISS_NEON
    case Backend::Neon:
        return {Backend::Neon, dot_neon, axpy_neon, matvec_neon, matvec_add_neon, matmul_neon};
#endif
    default:
        return kScalar;
    }
}

Backend detect_backend() {
    if (const char* env = std::getenv("DELTAISS_KERNELS")) {
        std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
        if (v == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
    }
#if DELTAISS_X86
    if (avx2_supported()) return Backend::Avx2;
#endif
#if DELTAISS_NEON
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

Dispatch g_dispatch = make_dispatch(detect_backend());

} // namespace

Backend active_backend() { return g_dispatch.backend; }

bool backend_available(Backend b) {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if DELTAISS_X86
        return avx2_supported();
#else
        return false;
#endif
    case Backend::Neon:
#if DELTAISS_NEON
        return true;
#else
        return false;
#endif
    }
    return false;
}

void force_backend(Backend b) {
    if (!backend_available(b))
        fail(ErrorKind::Unsupported, "kernel backend not available on this machine: " + backend_name(b));
    g_dispatch = make_dispatch(b);
}

void reset_backend() { g_dispatch = make_dispatch(detect_backend()); }

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) { return g_dispatch.dot(a, b, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) { g_dispatch.axpy(alpha, x, y, n); }

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    g_dispatch.matvec(a, rows, cols, x, y);
}

void matvec_add(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    g_dispatch.matvec_add(a, rows, cols, x, y);
}

void matmul(const double* a, std::size_t m, std::size_t k, const double* b, std::size_t n, double* c) {
    g_dispatch.matmul(a, m, k, b, n, c);
}

} // namespace deltaiss::kernels
