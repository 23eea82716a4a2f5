#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace regs {

// Square row-major matrix; sized for local stencils (n up to a few hundred).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  const std::vector<double>& data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct FactorOptions {
  // A pivot at or below pivot_floor * max|diag| is treated as a failure.
  double pivot_floor = 1e-12;
  // Opt-in ridge of 1e-12 * trace / n, applied once after a failure.
  bool allow_jitter = false;
};

// Lower-triangular Cholesky factor A = L L^T. Explicit inverses are never
// formed; all solves go through the triangular factors.
class Cholesky {
 public:
  // Throws FactorizationError carrying the failing pivot index.
  static Cholesky factor(const Matrix& a, const FactorOptions& opt = {});

  std::size_t size() const { return l_.size(); }
  const Matrix& lower() const { return l_; }
  bool jittered() const { return ridge_ > 0.0; }
  double ridge() const { return ridge_; }
  double min_pivot() const { return min_pivot_; }

  // L^{-1} b
  std::vector<double> forward(std::span<const double> b) const;
  // L^{-T} b
  std::vector<double> backward(std::span<const double> b) const;
  // A^{-1} b
  std::vector<double> solve(std::span<const double> b) const;
  // b^T A^{-1} b = |L^{-1} b|^2
  double inverse_quadratic(std::span<const double> b) const;

 private:
  Matrix l_;
  double ridge_ = 0.0;
  double min_pivot_ = 0.0;
};

double norm2(std::span<const double> v);

}  // namespace regs
