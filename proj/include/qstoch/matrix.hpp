#pragma once

// Dense row-major matrices over double and std::complex<double>.
//
// Kronecker convention: for a (ra x ca) and b (rb x cb), kron(a, b) has entry
// (ia*rb + ib, ja*cb + jb) equal to a(ia, ja) * b(ib, jb). Every tensor-product
// index in the library (channels, POVM products, coherence matrices) follows it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "qstoch/errors.hpp"
#include "qstoch/kernels.hpp"

namespace qstoch {

using cplx = std::complex<double>;

namespace detail {
template <class T>
bool is_finite(const T& v) {
  if constexpr (std::is_same_v<T, cplx>) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return std::isfinite(v);
  }
}

template <class T>
double abs_value(const T& v) {
  return std::abs(v);
}
}  // namespace detail

template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;

  /// Zero matrix.
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  }

  /// Takes ownership of row-major `data`; rejects wrong sizes and non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
      throw DimensionError("entry count " + std::to_string(data_.size()) + " != " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::all_of(data_.begin(), data_.end(), [](const T& v) { return detail::is_finite(v); })) {
      throw ValidationError("matrix has non-finite entries");
    }
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged initializer list");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix constant(std::size_t rows, std::size_t cols, T value) {
    Matrix m(rows, cols);
    std::fill(m.data_.begin(), m.data_.end(), value);
    return m;
  }

  static Matrix diagonal(std::span<const T> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  static Matrix column(std::span<const T> values) {
    return Matrix(values.size(), 1, std::vector<T>(values.begin(), values.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Conjugate transpose (plain transpose for real matrices).
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<T, cplx>) {
          t(j, i) = std::conj((*this)(i, j));
        } else {
          t(j, i) = (*this)(i, j);
        }
      }
    return t;
  }

  T trace() const {
    if (!is_square()) throw DimensionError("trace of a non-square matrix");
    T s{};
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  Matrix& operator/=(T s) {
    for (auto& v : data_) v /= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator/(Matrix a, T s) { return a /= s; }
  friend Matrix operator-(Matrix a) { return a *= T(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("matmul shape mismatch: " + a.shape_string() + " * " + b.shape_string());
    }
    Matrix c(a.rows_, b.cols_);
    if constexpr (std::is_same_v<T, cplx>) {
      kernels::cgemm(a.rows_, a.cols_, b.cols_, a.data_, b.data_, c.data_);
    } else {
      kernels::dgemm(a.rows_, a.cols_, b.cols_, a.data_, b.data_, c.data_);
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError(std::string("shape mismatch in '") + op + "': " + shape_string() +
                           " vs " + o.shape_string());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

/// Kronecker product, row index ia*rb + ib.
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t rb = b.rows(), cb = b.cols();
  Matrix<T> out(a.rows() * rb, a.cols() * cb);
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const T s = a(ia, ja);
      for (std::size_t ib = 0; ib < rb; ++ib)
        for (std::size_t jb = 0; jb < cb; ++jb) out(ia * rb + ib, ja * cb + jb) = s * b(ib, jb);
    }
  return out;
}

/// Largest |a_ij - b_ij|. Shapes must agree.
template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff shape mismatch: " + a.shape_string() + " vs " +
                         b.shape_string());
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

template <class T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Hilbert-Schmidt inner product tr(a b^dagger).
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// tr(a b) without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a - a^dagger|.
double hermiticity_defect(const ComplexMatrix& a);

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.is_square() && hermiticity_defect(a) <= tol;
}

/// Real part, entrywise. Callers use it where the imaginary part is known to vanish.
RealMatrix real_part(const ComplexMatrix& a);

ComplexMatrix to_complex(const RealMatrix& a);

/// Column sums of a real matrix.
std::vector<double> column_sums(const RealMatrix& m);

}  // namespace qstoch
