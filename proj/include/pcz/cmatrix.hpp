#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pcz/types.hpp"

namespace pcz {

// Dense row-major complex matrix sized for the 3..9 dimensional problems in
// this project. Products go through the dispatched kernels.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cdouble> values);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const cdouble> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }
  std::span<cdouble> values() { return data_; }
  std::span<const cdouble> values() const { return data_; }

  CMatrix adjoint() const;
  cdouble trace() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cdouble s);

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cdouble s, CMatrix a) { return a *= s; }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
// max |U^dagger U - I|
double unitarity_defect(const CMatrix& u);

}  // namespace pcz
