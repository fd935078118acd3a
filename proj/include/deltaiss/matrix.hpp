#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace deltaiss {

/// Dense real matrix, row-major. The workhorse value type of the library:
/// small (n up to a few hundred), immutable by convention once built.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    // Row-wise brace construction: DenseMatrix{{1,2},{3,4}}.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return DenseMatrix(rows, cols); }
    static DenseMatrix column(const std::vector<double>& entries);
    static DenseMatrix row(const std::vector<double>& entries);
    static DenseMatrix diagonal(const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    const std::vector<double>& entries() const { return data_; }

    DenseMatrix transposed() const;
    DenseMatrix operator*(const DenseMatrix& rhs) const;
    DenseMatrix operator+(const DenseMatrix& rhs) const;
    DenseMatrix operator-(const DenseMatrix& rhs) const;
    DenseMatrix operator-() const;
    DenseMatrix scaled(double alpha) const;
    friend DenseMatrix operator*(double alpha, const DenseMatrix& m) { return m.scaled(alpha); }

    std::vector<double> mul_vec(const std::vector<double>& x) const;

    /// Copies `m` into this matrix with its top-left corner at (i, j).
    void set_block(std::size_t i, std::size_t j, const DenseMatrix& m);
    DenseMatrix block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) const;

    bool is_finite() const;
    bool is_square() const { return rows_ == cols_; }
    double frobenius_norm() const;
    double max_abs() const;
    double max_abs_diff(const DenseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric real matrix stored as its packed lower triangle, so the value
/// can never drift away from symmetry.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t n) : n_(n), lower_(n * (n + 1) / 2, 0.0) {}

    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(const std::vector<double>& entries);
    /// Accepts a square matrix that is symmetric within `tol` (relative to its
    /// magnitude) and stores the exact average of the two triangles.
    static SymmetricMatrix from_dense(const DenseMatrix& m, double tol = 1e-9);

    std::size_t n() const { return n_; }

    double& at(std::size_t i, std::size_t j) { return lower_[index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return lower_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return at(i, j); }

    const std::vector<double>& packed_lower() const { return lower_; }
    std::vector<double>& packed_lower() { return lower_; }

    DenseMatrix to_dense() const;
    double trace() const;
    double frobenius_norm() const;
    bool is_finite() const;

private:
    static std::size_t index_lower(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }
    static std::size_t index(std::size_t i, std::size_t j) {
        return i >= j ? index_lower(i, j) : index_lower(j, i);
    }

    std::size_t n_ = 0;
    std::vector<double> lower_;
};

} // namespace deltaiss
