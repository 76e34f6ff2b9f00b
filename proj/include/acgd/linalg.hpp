#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace acgd {

using Vector = std::vector<double>;
using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

// Dense row-major matrix. Rows of a constraint Jacobian are the constraint
// gradients, so row access is the common path.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ConstSpan row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  MutSpan row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  ConstSpan flat() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Thin helpers over the dispatched kernels.
double dot(ConstSpan a, ConstSpan b);
double norm(ConstSpan a);
double norm_sq(ConstSpan a);
double dist_sq(ConstSpan a, ConstSpan b);
double frobenius_norm(const Matrix& a);
// y += a * x
void axpy(double a, ConstSpan x, MutSpan y);
// a * x + b * y
Vector combine(double a, ConstSpan x, double b, ConstSpan y);
Vector scaled(double a, ConstSpan x);
// Euclidean norm of the positive part.
double positive_part_norm(ConstSpan g);
bool all_finite(ConstSpan x);

}  // namespace acgd
