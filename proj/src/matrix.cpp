#include "deltaiss/matrix.hpp"

#include "deltaiss/error.hpp"
#include "deltaiss/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace deltaiss {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols)
        fail(ErrorKind::Dimension, "entry count does not match matrix shape");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            fail(ErrorKind::Dimension, "ragged initializer for DenseMatrix");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::column(const std::vector<double>& entries) {
    return DenseMatrix(entries.size(), 1, entries);
}

DenseMatrix DenseMatrix::row(const std::vector<double>& entries) {
    return DenseMatrix(1, entries.size(), entries);
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& entries) {
    DenseMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        fail(ErrorKind::Dimension, "matrix product shape mismatch");
    DenseMatrix c(rows_, rhs.cols_);
    kernels::matmul(data(), rows_, cols_, rhs.data(), rhs.cols_, c.data());
    return c;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        fail(ErrorKind::Dimension, "matrix sum shape mismatch");
    DenseMatrix c(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = data_[i] + rhs.data_[i];
    return c;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        fail(ErrorKind::Dimension, "matrix difference shape mismatch");
    DenseMatrix c(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = data_[i] - rhs.data_[i];
    return c;
}

DenseMatrix DenseMatrix::operator-() const { return scaled(-1.0); }

DenseMatrix DenseMatrix::scaled(double alpha) const {
    DenseMatrix c(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = alpha * data_[i];
    return c;
}

std::vector<double> DenseMatrix::mul_vec(const std::vector<double>& x) const {
    if (x.size() != cols_)
        fail(ErrorKind::Dimension, "matrix-vector shape mismatch");
    std::vector<double> y(rows_, 0.0);
    kernels::matvec(data(), rows_, cols_, x.data(), y.data());
    return y;
}

void DenseMatrix::set_block(std::size_t i, std::size_t j, const DenseMatrix& m) {
    if (i + m.rows_ > rows_ || j + m.cols_ > cols_)
        fail(ErrorKind::Dimension, "block does not fit at the requested offset");
    for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t c = 0; c < m.cols_; ++c) (*this)(i + r, j + c) = m(r, c);
}

DenseMatrix DenseMatrix::block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) const {
    if (i + r > rows_ || j + c > cols_)
        fail(ErrorKind::Dimension, "block range out of bounds");
    DenseMatrix b(r, c);
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < c; ++y) b(x, y) = (*this)(i + x, j + y);
    return b;
}

bool DenseMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseMatrix::frobenius_norm() const {
    return std::sqrt(kernels::dot(data(), data(), data_.size()));
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorKind::Dimension, "max_abs_diff shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.at(i, i) = 1.0;
    return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& entries) {
    SymmetricMatrix s(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) s.at(i, i) = entries[i];
    return s;
}

SymmetricMatrix SymmetricMatrix::from_dense(const DenseMatrix& m, double tol) {
    if (!m.is_square())
        fail(ErrorKind::Dimension, "symmetric matrix must be square");
    const double scale = std::max(1.0, m.max_abs());
    SymmetricMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol * scale)
                fail(ErrorKind::InvalidInput, "matrix is not symmetric within tolerance");
            s.at(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return s;
}

DenseMatrix SymmetricMatrix::to_dense() const {
    DenseMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = at(i, j);
    return m;
}

double SymmetricMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

double SymmetricMatrix::frobenius_norm() const { return to_dense().frobenius_norm(); }

bool SymmetricMatrix::is_finite() const {
    return std::all_of(lower_.begin(), lower_.end(), [](double v) { return std::isfinite(v); });
}

} // namespace deltaiss
