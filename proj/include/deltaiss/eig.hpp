#pragma once

#include "deltaiss/matrix.hpp"

#include <vector>

namespace deltaiss {

struct SymEig {
    std::vector<double> eigenvalues; // ascending
    DenseMatrix eigenvectors;        // orthonormal columns, same order
};

/// Full symmetric eigendecomposition by cyclic Jacobi sweeps.
/// Reconstruction Q diag(w) Q^T matches the input to ~1e-14 relative;
/// intended for the small dense matrices this library works with (n <= ~50,
/// usable to a few hundred).
SymEig sym_eig(const SymmetricMatrix& s);

/// Largest singular value, computed as sqrt(lambda_max(M^T M)).
double spectral_norm(const DenseMatrix& m);

/// Largest eigenvalue modulus of a square matrix. Symmetric input goes
/// through sym_eig; anything else through power iteration with restarts,
/// which converges to the Perron root for elementwise-nonnegative matrices.
double spectral_radius(const DenseMatrix& m);

struct DefinitenessReport {
    bool positive_definite; // lambda_min > margin
    double lambda_min;
};

DefinitenessReport is_positive_definite(const SymmetricMatrix& s, double margin = 0.0);

/// Lower-triangular Cholesky factor; returns false (leaving `l` unspecified)
/// when the matrix is not numerically positive definite.
bool cholesky(const SymmetricMatrix& s, DenseMatrix& l);

/// log(det(S)) from a Cholesky factor already known to exist.
double cholesky_logdet(const DenseMatrix& l);

/// Solves S x = b given the Cholesky factor of S.
std::vector<double> cholesky_solve(const DenseMatrix& l, const std::vector<double>& b);

/// S^{-1} through the eigendecomposition, flooring eigenvalues at `floor`
/// so near-singular certificates invert stably.
SymmetricMatrix spd_inverse(const SymmetricMatrix& s, double floor = 1e-12);

/// General square solve A X = B by LU with partial pivoting.
DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix inverse(const DenseMatrix& a);

} // namespace deltaiss
