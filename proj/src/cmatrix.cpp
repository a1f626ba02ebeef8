#include "pcz/cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "pcz/kernels.hpp"

namespace pcz {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cdouble> values)
    : rows_(rows), cols_(cols), data_(values) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("CMatrix initializer has " + std::to_string(data_.size()) +
                          " values, expected " + std::to_string(rows * cols));
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cdouble> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

cdouble CMatrix::trace() const {
  cdouble t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("CMatrix += shape mismatch");
  kernels::caxpy(1.0, other.data(), data(), data_.size());
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("CMatrix -= shape mismatch");
  kernels::caxpy(-1.0, other.data(), data(), data_.size());
  return *this;
}

CMatrix& CMatrix::operator*=(cdouble s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("CMatrix product shape mismatch");
  CMatrix c(a.rows_, b.cols_);
  kernels::cmatmul(a.data(), b.data(), c.data(), a.rows_, a.cols_, b.cols_);
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cdouble s = a(i, j);
      if (s == cdouble(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
      }
    }
  }
  return out;
}

double max_abs(const CMatrix& m) {
  double best = 0.0;
  for (const auto& v : m.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("max_abs_diff shape mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    best = std::max(best, std::abs(a.values()[i] - b.values()[i]));
  }
  return best;
}

double unitarity_defect(const CMatrix& u) {
  if (!u.square()) throw InvalidArgument("unitarity_defect needs a square matrix");
  return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.rows()));
}

}  // namespace pcz
