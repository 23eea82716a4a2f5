#include "regs/rbffd.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <limits>

#include "regs/parallel.hpp"
#include "regs/special.hpp"

namespace regs {

DiffOperatorSpec DiffOperatorSpec::parse(const std::string& name) {
  if (name == "identity") return {DiffKind::identity, 0};
  if (name == "dx") return {DiffKind::partial, 0};
  if (name == "dy") return {DiffKind::partial, 1};
  if (name == "dz") return {DiffKind::partial, 2};
  if (name == "laplacian") return {DiffKind::laplacian, 0};
  throw InvalidSpecError("operator must be identity, dx, dy, dz or laplacian, got '" + name + "'");
}

std::string DiffOperatorSpec::name() const {
  switch (kind) {
    case DiffKind::identity: return "identity";
    case DiffKind::partial: return std::string("d") + "xyz"[axis];
    case DiffKind::laplacian: return "laplacian";
  }
  return "identity";
}

namespace {

void check_operator(const KernelSpec& spec, const DiffOperatorSpec& op) {
  spec.validate();
  if (op.kind == DiffKind::partial && (op.axis < 0 || op.axis >= spec.d)) {
    throw InvalidSpecError("partial derivative axis outside the working dimension");
  }
  if (!(spec.nu() > op.order())) {
    throw InsufficientSmoothnessError("kernel order m = " + format_double(spec.m) + " is too low for a derivative of order " +
                                      std::to_string(op.order()) + " in " + std::to_string(spec.d) + "D");
  }
}

}  // namespace

double kernel_derivative(const KernelSpec& spec, const Point& z, const Point& x, const DiffOperatorSpec& op) {
  const double eps = spec.eps;
  const double nu = spec.nu();
  const double r = distance(z, x);
  switch (op.kind) {
    case DiffKind::identity: return special::matern_radial(nu, eps * r);
    case DiffKind::partial: {
      const double dz = z[op.axis] - x[op.axis];
      if (dz == 0.0) return 0.0;
      return -eps * eps * dz * special::matern_radial(nu - 1.0, eps * r);
    }
    case DiffKind::laplacian: {
      const double first = -spec.d * eps * eps * special::matern_radial(nu - 1.0, eps * r);
      // r^2 psi_{nu-2}(eps r) vanishes at the origin when nu > 2.
      const double second = r == 0.0 ? 0.0 : std::pow(eps, 4) * r * r * special::matern_radial(nu - 2.0, eps * r);
      return first + second;
    }
  }
  return 0.0;
}

std::vector<double> rbf_fd_weights(const KernelSpec& spec, std::span<const Point> sites, const Point& z,
                                   const DiffOperatorSpec& op, const FactorOptions& opt) {
  check_operator(spec, op);
  const Cholesky chol = factor_kernel_matrix(spec, sites, opt);
  std::vector<double> rhs(sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j) rhs[j] = kernel_derivative(spec, z, sites[j], op);
  return chol.solve(rhs);
}

std::vector<std::size_t> flag_points(std::span<const double> s_tilde, int order, int d) {
  const double threshold = order + 0.5 * d;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s_tilde.size(); ++i) {
    if (s_tilde[i] <= threshold) out.push_back(i);
  }
  return out;
}

std::string to_string(DerivativeStatus s) {
  switch (s) {
    case DerivativeStatus::ok: return "ok";
    case DerivativeStatus::skipped: return "skipped";
    case DerivativeStatus::failed: return "failed";
  }
  return "ok";
}

std::vector<DerivativePoint> differentiate_field(const PointSet& ps, std::span<const double> values,
                                                 std::span<const Point> eval_points, const DiffOperatorSpec& op,
                                                 const KernelSpec& spec, const std::vector<bool>& flagged,
                                                 const DiffFieldOptions& opt) {
  if (values.size() != ps.size()) throw DomainError("differentiate_field: one value per site is required");
  if (!flagged.empty() && flagged.size() != eval_points.size()) {
    throw DomainError("differentiate_field: flags must match the evaluation points");
  }
  if (!opt.centers.empty() && opt.centers.size() != eval_points.size()) {
    throw DomainError("differentiate_field: centers must match the evaluation points");
  }
  if (spec.d != ps.dim()) throw InvalidSpecError("kernel dimension does not match the point set");
  check_operator(spec, op);
  std::vector<DerivativePoint> out(eval_points.size());
  parallel_for(eval_points.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    DerivativePoint& p = out[i];
    p.z = eval_points[i];
    p.value = std::numeric_limits<double>::quiet_NaN();
    if (!flagged.empty() && flagged[i]) {
      p.status = DerivativeStatus::skipped;
      return;
    }
    try {
      const Stencil st = knn_stencil(ps, opt.centers.empty() ? p.z : opt.centers[i], opt.n);
      const auto sites = gather(ps, st.indices);
      const auto w = rbf_fd_weights(spec, sites, p.z, op, opt.factor);
      double v = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * values[st.indices[j]];
      p.value = v;
      p.status = DerivativeStatus::ok;
    } catch (const Error& ex) {
      p.status = DerivativeStatus::failed;
      p.error = ex.what();
    }
  });
  return out;
}

std::string derivative_csv(std::span<const DerivativePoint> pts, int d) {
  std::string out;
  for (int k = 0; k < d; ++k) out += "x" + std::to_string(k + 1) + ",";
  out += "value,status\n";
  for (const DerivativePoint& p : pts) {
    for (int k = 0; k < d; ++k) {
      out += format_double(p.z[k]);
      out += ',';
    }
    out += p.status == DerivativeStatus::ok ? format_double(p.value) : std::string("nan");
    out += ',';
    out += to_string(p.status);
    out += '\n';
  }
  return out;
}

std::vector<DerivativePoint> read_derivative_csv(const std::string& path, int d) {
  std::ifstream f(path);
  if (!f) throw DataError(path, 0, "cannot open");
  std::vector<DerivativePoint> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(f, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != static_cast<std::size_t>(d) + 2) {
      throw DataError(path, row, "expected " + std::to_string(d + 2) + " columns, found " + std::to_string(cells.size()));
    }
    if (row == 1 && cells.back() == "status") continue;
    DerivativePoint p;
    try {
      for (int k = 0; k < d; ++k) p.z[k] = std::stod(cells[k]);
      p.value = std::stod(cells[d]);
    } catch (const std::exception&) {
      throw DataError(path, row, "non-numeric coordinate or value");
    }
    const std::string& st = cells[d + 1];
    if (st == "ok") {
      p.status = DerivativeStatus::ok;
    } else if (st == "skipped") {
      p.status = DerivativeStatus::skipped;
    } else if (st == "failed") {
      p.status = DerivativeStatus::failed;
    } else {
      throw DataError(path, row, "unknown status '" + st + "'");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace regs
