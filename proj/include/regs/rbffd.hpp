#pragma once

// Kernel-only RBF-FD weights (no polynomial augmentation) and the
// regularity-limited flag s-tilde <= |alpha| + d/2 that gates them.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "regs/dense.hpp"
#include "regs/errors.hpp"
#include "regs/geometry.hpp"
#include "regs/kernel.hpp"

namespace regs {

class InsufficientSmoothnessError : public Error {
 public:
  using Error::Error;
};

enum class DiffKind { identity, partial, laplacian };

struct DiffOperatorSpec {
  DiffKind kind = DiffKind::identity;
  int axis = 0;  // partial only, 0-based

  int order() const { return kind == DiffKind::identity ? 0 : kind == DiffKind::partial ? 1 : 2; }
  // identity, dx, dy, dz, laplacian
  static DiffOperatorSpec parse(const std::string& name);
  std::string name() const;
};

// D^alpha applied in the first argument: [D^alpha Phi(., x)](z).
double kernel_derivative(const KernelSpec& spec, const Point& z, const Point& x, const DiffOperatorSpec& op);

// Solves Phi(X, X) w = [D^alpha Phi(., x_j)](z). Throws
// InsufficientSmoothnessError when m - d/2 <= |alpha| and FactorizationError
// when the kernel matrix does not factor.
std::vector<double> rbf_fd_weights(const KernelSpec& spec, std::span<const Point> sites, const Point& z,
                                   const DiffOperatorSpec& op, const FactorOptions& opt = {});

// Indices with s_tilde <= order + d/2. NaN estimates are not flagged.
std::vector<std::size_t> flag_points(std::span<const double> s_tilde, int order, int d);

enum class DerivativeStatus { ok, skipped, failed };
std::string to_string(DerivativeStatus s);

struct DerivativePoint {
  Point z{};
  double value = 0.0;  // NaN unless ok
  DerivativeStatus status = DerivativeStatus::ok;
  std::string error;
};

struct DiffFieldOptions {
  std::size_t n = 20;
  unsigned threads = 0;
  FactorOptions factor;
  // Stencil centers, one per evaluation point; empty centers each stencil on
  // its evaluation point. A shifted center keeps the stencil off a nearby
  // low-regularity feature.
  std::vector<Point> centers;
};

// Flagged points are skipped, never silently zeroed. flagged may be empty
// (nothing skipped) or hold one entry per evaluation point.
std::vector<DerivativePoint> differentiate_field(const PointSet& ps, std::span<const double> values,
                                                 std::span<const Point> eval_points, const DiffOperatorSpec& op,
                                                 const KernelSpec& spec, const std::vector<bool>& flagged,
                                                 const DiffFieldOptions& opt = {});

// Columns x1..xd, value, status.
std::string derivative_csv(std::span<const DerivativePoint> pts, int d);

// Reads what derivative_csv writes. Throws DataError naming the file and row.
std::vector<DerivativePoint> read_derivative_csv(const std::string& path, int d);

}  // namespace regs
