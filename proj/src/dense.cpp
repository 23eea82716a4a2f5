#include "regs/dense.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "regs/errors.hpp"
#include "regs/simd.hpp"

namespace regs {

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  const auto& k = simd::active();
  std::vector<double> y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = k.dot(data_.data() + i * n_, x.data(), n_);
  return y;
}

namespace {

struct Failure {
  std::size_t pivot;
  double value;
};

// Cholesky-Banachiewicz, row by row; each entry is one contiguous dot.
std::optional<Failure> factor_in_place(const Matrix& a, double ridge, double floor_abs,
                                       Matrix& l, double& min_pivot) {
  const std::size_t n = a.size();
  const auto& k = simd::active();
  l = Matrix(n);
  min_pivot = HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i) {
    double* li = &l(i, 0);
    for (std::size_t j = 0; j < i; ++j) {
      const double s = a(i, j) - k.dot(li, &l(j, 0), j);
      li[j] = s / l(j, j);
    }
    const double d = a(i, i) + ridge - k.dot(li, li, i);
    if (!(d > floor_abs) || !std::isfinite(d)) return Failure{i, d};
    min_pivot = std::min(min_pivot, d);
    li[i] = std::sqrt(d);
  }
  return std::nullopt;
}

}  // namespace

Cholesky Cholesky::factor(const Matrix& a, const FactorOptions& opt) {
  const std::size_t n = a.size();
  double max_diag = 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, std::fabs(a(i, i)));
    trace += a(i, i);
  }
  const double floor_abs = opt.pivot_floor * max_diag;

  Cholesky c;
  auto fail = factor_in_place(a, 0.0, floor_abs, c.l_, c.min_pivot_);
  if (!fail) return c;
  if (opt.allow_jitter && n > 0) {
    const double ridge = 1e-12 * trace / static_cast<double>(n);
    auto retry = factor_in_place(a, ridge, floor_abs, c.l_, c.min_pivot_);
    if (!retry) {
      c.ridge_ = ridge;
      return c;
    }
    fail = retry;
  }
  throw FactorizationError(fail->pivot, fail->value);
}

std::vector<double> Cholesky::forward(std::span<const double> b) const {
  const std::size_t n = size();
  const auto& k = simd::active();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (y[i] - k.dot(&l_(i, 0), y.data(), i)) / l_(i, i);
  }
  return y;
}

std::vector<double> Cholesky::backward(std::span<const double> b) const {
  // Column-oriented sweep so the inner update stays contiguous in rows of L.
  const std::size_t n = size();
  const auto& k = simd::active();
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t ii = n; ii-- > 0;) {
    x[ii] /= l_(ii, ii);
    k.axpy(-x[ii], &l_(ii, 0), x.data(), ii);
  }
  return x;
}

std::vector<double> Cholesky::solve(std::span<const double> b) const { return backward(forward(b)); }

double Cholesky::inverse_quadratic(std::span<const double> b) const {
  const auto y = forward(b);
  return simd::active().dot(y.data(), y.data(), y.size());
}

double norm2(std::span<const double> v) {
  return std::sqrt(simd::active().dot(v.data(), v.data(), v.size()));
}

}  // namespace regs
