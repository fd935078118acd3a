#pragma once

#include <cstddef>
#include <string>

// Dense double-precision inner loops shared by the whole library.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64). The active backend is selected
// once at startup from CPU capabilities; the DELTAISS_KERNELS environment
// variable ("scalar", "avx2", "neon") or force_backend() overrides it.
// SIMD and scalar paths are equivalence-tested against each other; they
// may differ by rounding (FMA, reassociation) but not beyond it.

namespace deltaiss::kernels {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
bool backend_available(Backend b);
void force_backend(Backend b); // throws Error(Unsupported) if unavailable
void reset_backend();          // re-detect, honoring DELTAISS_KERNELS
std::string backend_name(Backend b);

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

/// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// y = A x with A row-major (rows x cols)
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);

/// y += A x with A row-major (rows x cols)
void matvec_add(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y);

/// C = A B with A (m x k), B (k x n), C (m x n), all row-major. C is overwritten.
void matmul(const double* a, std::size_t m, std::size_t k,
            const double* b, std::size_t n, double* c);

} // namespace deltaiss::kernels
