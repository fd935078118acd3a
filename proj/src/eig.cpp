#include "deltaiss/eig.hpp"

#include "deltaiss/error.hpp"
#include "deltaiss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace deltaiss {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

// Deterministic 64-bit mixer used to seed power-iteration restarts.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

SymEig sym_eig(const SymmetricMatrix& s) {
    if (!s.is_finite())
        fail(ErrorKind::InvalidInput, "sym_eig: non-finite input");
    const std::size_t n = s.n();
    DenseMatrix a = s.to_dense();
    DenseMatrix q = DenseMatrix::identity(n);

    if (n > 1) {
        const double scale = std::max(1.0, a.frobenius_norm());
        const double target = 1e-15 * scale;
        const int max_sweeps = 64;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            if (off_diagonal_norm(a) <= target) break;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t r = p + 1; r < n; ++r) {
                    const double apr = a(p, r);
                    if (apr == 0.0) continue;
                    // Classic two-sided Jacobi rotation annihilating a(p,r).
                    const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                    double t;
                    if (std::abs(theta) > 1e154) { // avoid theta^2 overflow
                        t = 0.5 / theta;
                    } else {
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double sn = t * c;
                    const double tau = sn / (1.0 + c);
                    const double h = t * apr;

                    a(p, p) -= h;
                    a(r, r) += h;
                    a(p, r) = 0.0;
                    a(r, p) = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (j == p || j == r) continue;
                        const double ajp = a(j, p);
                        const double ajr = a(j, r);
                        a(j, p) = ajp - sn * (ajr + tau * ajp);
                        a(j, r) = ajr + sn * (ajp - tau * ajr);
                        a(p, j) = a(j, p);
                        a(r, j) = a(j, r);
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        const double qjp = q(j, p);
                        const double qjr = q(j, r);
                        q(j, p) = qjp - sn * (qjr + tau * qjp);
                        q(j, r) = qjr + sn * (qjp - tau * qjr);
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SymEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = DenseMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = q(i, order[k]);
    }
    return out;
}

double spectral_norm(const DenseMatrix& m) {
    if (!m.is_finite())
        fail(ErrorKind::InvalidInput, "spectral_norm: non-finite input");
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const DenseMatrix gram = m.transposed() * m;
    const SymEig eig = sym_eig(SymmetricMatrix::from_dense(gram, 1e-9));
    const double lmax = eig.eigenvalues.back();
    return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
}

double spectral_radius(const DenseMatrix& m) {
    if (!m.is_square())
        fail(ErrorKind::Dimension, "spectral_radius: matrix must be square");
    if (!m.is_finite())
        fail(ErrorKind::InvalidInput, "spectral_radius: non-finite input");
    const std::size_t n = m.rows();
    if (n == 0) return 0.0;

    bool symmetric = true;
    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < n && symmetric; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-13 * scale) { symmetric = false; break; }
    if (symmetric) {
        const SymEig eig = sym_eig(SymmetricMatrix::from_dense(m, 1e-12));
        return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    }

    // Power iteration, 10 deterministic restarts (the first from the all-ones
    // vector, which sits in the Perron cone for nonnegative matrices). The
    // growth factor ||M x|| converges to |lambda_1| when the dominant
    // eigenvalue is real; otherwise the capped geometric mean is reported.
    const int restarts = 10;
    const int max_iters = 10000;
    const double tol = 1e-10;
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x(n);
        if (r == 0) {
            std::fill(x.begin(), x.end(), 1.0);
        } else {
            std::uint64_t state = splitmix64(0xD155ULL + static_cast<std::uint64_t>(r));
            for (std::size_t i = 0; i < n; ++i) {
                state = splitmix64(state);
                x[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
            }
        }
        double nx = std::sqrt(kernels::dot(x.data(), x.data(), n));
        if (nx == 0.0) continue;
        for (double& v : x) v /= nx;

        std::vector<double> y(n);
        double growth = 0.0;
        double prev = -1.0;
        double log_sum = 0.0;
        int counted = 0;
        bool converged = false;
        for (int it = 0; it < max_iters; ++it) {
            kernels::matvec(m.data(), n, n, x.data(), y.data());
            growth = std::sqrt(kernels::dot(y.data(), y.data(), n));
            if (growth < 1e-150) { growth = 0.0; converged = true; break; }
            for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / growth;
            if (it > 0 && std::abs(growth - prev) <= tol * std::max(1.0, growth)) {
                converged = true;
                break;
            }
            prev = growth;
            if (it >= max_iters - 64) { // tail window for the non-convergent case
                log_sum += std::log(growth);
                ++counted;
            }
        }
        const double estimate = converged ? growth
                                          : (counted > 0 ? std::exp(log_sum / counted) : growth);
        best = std::max(best, estimate);
    }
    return best;
}

DefinitenessReport is_positive_definite(const SymmetricMatrix& s, double margin) {
    if (!s.is_finite())
        fail(ErrorKind::InvalidInput, "is_positive_definite: non-finite input");
    const SymEig eig = sym_eig(s);
    const double lmin = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    return {lmin > margin, lmin};
}

bool cholesky(const SymmetricMatrix& s, DenseMatrix& l) {
    const std::size_t n = s.n();
    l = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = s.at(i, j) - kernels::dot(l.row_ptr(i), l.row_ptr(j), j);
            if (i == j) {
                if (sum <= 0.0 || !std::isfinite(sum)) return false;
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return true;
}

double cholesky_logdet(const DenseMatrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

std::vector<double> cholesky_solve(const DenseMatrix& l, const std::vector<double>& b) {
    const std::size_t n = l.rows();
    if (b.size() != n)
        fail(ErrorKind::Dimension, "cholesky_solve: dimension mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = (b[i] - kernels::dot(l.row_ptr(i), y.data(), i)) / l(i, i);
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) sum -= l(j, ii) * x[j];
        x[ii] = sum / l(ii, ii);
    }
    return x;
}

SymmetricMatrix spd_inverse(const SymmetricMatrix& s, double floor) {
    const SymEig eig = sym_eig(s);
    const std::size_t n = s.n();
    DenseMatrix scaled(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double inv = 1.0 / std::max(eig.eigenvalues[j], floor);
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) = eig.eigenvectors(i, j) * inv;
    }
    return SymmetricMatrix::from_dense(scaled * eig.eigenvectors.transposed(), 1e-7);
}

DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.is_square())
        fail(ErrorKind::Dimension, "solve_linear: matrix must be square");
    if (a.rows() != b.rows())
        fail(ErrorKind::Dimension, "solve_linear: right-hand side row mismatch");
    const std::size_t n = a.rows();
    DenseMatrix lu = a;
    DenseMatrix x = b;
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (std::abs(lu(p, k)) < 1e-300)
            fail(ErrorKind::Singular, "solve_linear: matrix is singular");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / lu(k, k);
            lu(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= factor * x(k, j);
        }
    }
    for (std::size_t col = 0; col < x.cols(); ++col) {
        for (std::size_t ii = n; ii-- > 0;) {
            double sum = x(ii, col);
            for (std::size_t j = ii + 1; j < n; ++j) sum -= lu(ii, j) * x(j, col);
            x(ii, col) = sum / lu(ii, ii);
        }
    }
    return x;
}

DenseMatrix inverse(const DenseMatrix& a) { return solve_linear(a, DenseMatrix::identity(a.rows())); }

} // namespace deltaiss
