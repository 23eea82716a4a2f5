// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
// usage: acceptance [--cli PATH] [--workdir DIR] [criterion numbers...]

#include <Eigen/Dense>
#include <json.hpp>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "regs/bandlimited.hpp"
#include "regs/data.hpp"
#include "regs/kernel.hpp"
#include "regs/parallel.hpp"
#include "regs/profile.hpp"
#include "regs/rbffd.hpp"
#include "regs/refine.hpp"
#include "regs/special.hpp"
#include "regs/sweep.hpp"

using namespace regs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

data::Sample benchmark_1d() {
  const auto g = data::Generator::testfun1d;
  return data::sample(g, data::Layout::uniform_grid, 2000, data::default_box(g));
}

// ------------------------------------------------------------------ 1

Outcome tabulated_1d() {
  const double expected[3][6][2] = {
      {{0.84, 0.78}, {5.00, 2.82}, {0.80, 0.74}, {2.00, 1.76}, {0.86, 0.80}, {0.74, 0.64}},
      {{0.80, 0.76}, {2.92, 2.70}, {0.76, 0.72}, {1.82, 1.66}, {0.82, 0.78}, {0.66, 0.64}},
      {{0.78, 0.74}, {2.76, 2.54}, {0.74, 0.72}, {1.70, 1.56}, {0.78, 0.74}, {0.66, 0.64}}};
  const double eps[3] = {1.0, 0.8, 0.6};
  const double zs[6] = {-0.8, -0.6, -0.4, -0.2, 0.0, 0.5};
  const std::size_t ns[2] = {20, 30};
  const data::Sample s = benchmark_1d();
  const MGrid grid = MGrid::make(0.6, 3.5, 0.025);
  int hits = 0, total = 0;
  double worst = 0.0;
  std::string misses;
  for (int e = 0; e < 3; ++e)
    for (int zi = 0; zi < 6; ++zi)
      for (int ni = 0; ni < 2; ++ni) {
        const Stencil st = knn_stencil(s.points, make_point(zs[zi]), ns[ni]);
        const NormProfile p = compute_profile(s.points, st, s.values, grid, {EpsRule::constant, eps[e]});
        const double got = classify(p).s_tilde;
        const double err = std::fabs(got - expected[e][zi][ni]);
        worst = std::max(worst, err);
        ++total;
        if (err <= 0.15) {
          ++hits;
        } else if (misses.size() < 160) {
          misses += fmt(" (eps %.1f, z %.1f, n %zu: %.2f vs %.2f)", eps[e], zs[zi], ns[ni], got, expected[e][zi][ni]);
        }
      }
  return {hits == total, fmt("%d/%d within 0.15, worst error %.2f;%s", hits, total, worst, misses.c_str())};
}

// ------------------------------------------------------------------ 2

Outcome step_growth_slope() {
  bool ok = true;
  std::string detail;
  for (double q : {0.1, 0.05, 0.025}) {
    std::vector<Point> x;
    std::vector<double> y;
    const auto count = static_cast<int>(std::lround(1.0 / q));
    for (int i = 0; i <= count; ++i) {
      const double xi = -1.0 + 2.0 * q * i;
      x.push_back(make_point(xi));
      y.push_back(data::antiderivative_family(data::Antiderivative::step, xi));
    }
    const NormProfile p = compute_profile(x, y, 1, MGrid::make(2.0, 4.0, 0.025), {EpsRule::constant, 1.0});
    std::vector<double> ms, ls;
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
      if (p.saturated[k]) continue;
      ms.push_back(p.grid.values[k]);
      ls.push_back(std::log(p.eta[k]));
    }
    const double slope = ms.size() >= 2 ? fit_line(ms, ls).slope : std::nan("");
    const double ratio = slope / reference_rate(q);
    const bool pass = std::fabs(ratio - 1.0) <= 0.2;
    ok = ok && pass;
    detail += fmt("%sq %.3f: slope %.3f vs ln(pi/2q) %.3f (ratio %.3f)", detail.empty() ? "" : "; ", q, slope,
                  reference_rate(q), ratio);
  }
  return {ok, detail};
}

// ------------------------------------------------------------------ 3

Outcome map_structure_1d() {
  const data::Sample s = benchmark_1d();
  MapOptions opt;
  opt.n = 20;
  opt.grid = MGrid::make(0.6, 3.5, 0.025);
  const RegularityMap map = dense_map(s.points, s.values, s.points.points(), opt);
  const double m_max = opt.grid.values.back();
  auto min_near = [&](double x0) {
    double v = std::numeric_limits<double>::infinity();
    for (const MapPoint& p : map.points)
      if (std::fabs(p.z[0] - x0) <= 0.02 && p.status == PointStatus::ok) v = std::min(v, p.estimate.s_tilde);
    return v;
  };
  bool ok = true;
  std::string detail;
  for (double x0 : {-0.8, -0.4, 0.0, 0.5}) {
    const double v = min_near(x0);
    ok = ok && v < 1.0;
    detail += fmt("x=%.1f: %.2f; ", x0, v);
  }
  const double kink = min_near(-0.2), c1 = min_near(-0.6);
  ok = ok && kink >= 1.4 && kink <= 2.1 && c1 >= 2.4 && c1 <= 3.2;
  detail += fmt("x=-0.2: %.2f; x=-0.6: %.2f; ", kink, c1);
  std::size_t smooth = 0, at_max = 0;
  for (const MapPoint& p : map.points) {
    const double x = p.z[0];
    if (!((x >= 0.05 && x <= 0.45) || (x >= 0.55 && x <= 0.95))) continue;
    ++smooth;
    if (p.status == PointStatus::ok && p.estimate.s_tilde >= m_max - 1e-9) ++at_max;
  }
  ok = ok && at_max == smooth;
  detail += fmt("sin regions at m_max: %zu/%zu", at_max, smooth);
  return {ok, detail};
}

// ------------------------------------------------------------------ 4

Outcome stencil_size_trend() {
  const MGrid grid = MGrid::make(0.6, 3.5, 0.025);
  std::vector<Point> x;
  const int count = 200;
  for (int i = 0; i < count; ++i) x.push_back(make_point(-0.5 + static_cast<double>(i) / (count - 1)));
  const PointSet ps(1, x);
  auto estimate = [&](data::Antiderivative kind, std::size_t n) {
    std::vector<double> y;
    for (const Point& p : x) y.push_back(data::antiderivative_family(kind, p[0]));
    const Stencil st = knn_stencil(ps, make_point(0.0), n);
    return classify(compute_profile(ps, st, y, grid, {EpsRule::constant, 1.0}));
  };
  bool ok = true;
  std::string detail = "large n:";
  for (std::size_t n : {16, 20, 30, 40, 50}) {
    const double a = estimate(data::Antiderivative::step, n).s_tilde;
    const double b = estimate(data::Antiderivative::kink1, n).s_tilde;
    const double c = estimate(data::Antiderivative::kink2, n).s_tilde;
    const bool pass = a < b && b < c;
    ok = ok && pass;
    detail += fmt(" n=%zu %.2f<%.2f<%.2f%s", n, a, b, c, pass ? "" : "(x)");
  }
  detail += "; small n kinks:";
  for (std::size_t n : {4, 6, 8}) {
    const RegularityEstimate b = estimate(data::Antiderivative::kink1, n);
    const RegularityEstimate c = estimate(data::Antiderivative::kink2, n);
    const bool pass = b.kind != RegularityCase::elbow && c.kind != RegularityCase::elbow;
    ok = ok && pass;
    detail += fmt(" n=%zu %s/%s", n, to_string(b.kind).c_str(), to_string(c.kind).c_str());
  }
  return {ok, detail};
}

// ------------------------------------------------------------------ 5

Outcome stencil_shift() {
  const auto g = data::Generator::testfun2d;
  const data::Sample s = data::sample(g, data::Layout::halton, 40000, data::default_box(g));
  const data::Sample ev = data::sample(g, data::Layout::uniform_grid, 10000, data::default_box(g));
  MapOptions opt;
  opt.n = 50;
  opt.sweep.m_max = 5.0;
  opt.sweep.eps = {EpsRule::constant, 3.0};
  const RegularityMap map = sweep_map(s.points, s.values, ev.points.points(), opt, false);
  const StencilEstimator est = two_point_estimator(s.points, s.values, opt.sweep);
  const ShiftConfig cfg;
  std::size_t before[3] = {0, 0, 0}, after[3] = {0, 0, 0}, failed = 0;
  std::vector<RegularityEstimate> picked(map.points.size() * 3);
  std::vector<char> counted(map.points.size(), 0);
  parallel_for(map.points.size(), resolve_threads(), [&](std::size_t i) {
    const MapPoint& p = map.points[i];
    if (p.status != PointStatus::ok) return;
    counted[i] = 1;
    RefineResult r;
    try {
      r = refine_estimate(s.points, p.z, knn_stencil(s.points, p.z, opt.n), p.estimate, opt.sweep.m_max, est, cfg);
    } catch (const Error&) {
      for (int a = 0; a < 3; ++a) picked[3 * i + a] = p.estimate;
      return;
    }
    for (int a = 0; a < 3; ++a) {
      ShiftConfig c = cfg;
      c.c = ShiftConfig::safety_for_order(a);
      picked[3 * i + a] = select_admissible(r, c);
    }
  });
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    if (!counted[i]) {
      ++failed;
      continue;
    }
    for (int a = 0; a < 3; ++a) {
      const double threshold = a + 1.0;
      if (map.points[i].estimate.s_tilde <= threshold) ++before[a];
      if (picked[3 * i + a].s_tilde <= threshold) ++after[a];
    }
  }
  bool ok = true;
  std::string detail;
  for (int a = 0; a < 3; ++a) {
    const double red = before[a] ? 1.0 - static_cast<double>(after[a]) / static_cast<double>(before[a]) : 0.0;
    ok = ok && before[a] > 0 && red >= 0.30;
    detail += fmt("|a|=%d: %zu -> %zu (-%.0f%%); ", a, before[a], after[a], 100.0 * red);
  }
  detail += fmt("%zu of %zu points failed", failed, map.points.size());
  return {ok, detail};
}

// ------------------------------------------------------------------ 6

Outcome inverse_suite() {
  const auto suite = inverse_property_suite(200, 2024, 256);
  std::size_t held = 0;
  double worst = 0.0, min_ratio = std::numeric_limits<double>::infinity();
  for (const InverseInstance& in : suite) {
    held += in.check.holds ? 1 : 0;
    worst = std::max(worst, in.rel_change);
    min_ratio = std::min(min_ratio, in.check.lhs / in.check.rhs);
  }
  return {held == suite.size() && worst < 1e-8,
          fmt("%zu/%zu hold, min lhs/rhs %.4f, max relative change on doubling nodes %.2e", held, suite.size(),
              min_ratio, worst)};
}

// ------------------------------------------------------------------ 7

Outcome sweep_consistency() {
  const data::Sample s = benchmark_1d();
  const auto ev = s.points.points();
  MapOptions opt;
  opt.n = 20;
  // Largest top order whose unscreened sweep factors at every point.
  double m_max = 0.0;
  RegularityMap full;
  for (double m = 3.5; m >= 1.5 - 1e-9; m -= 0.25) {
    opt.sweep.m_max = m;
    full = sweep_map(s.points, s.values, ev, opt, false);
    const bool clean = std::none_of(full.points.begin(), full.points.end(),
                                    [](const MapPoint& p) { return p.status != PointStatus::ok; });
    if (clean) {
      m_max = m;
      break;
    }
  }
  if (m_max == 0.0) return {false, "no top order in [1.5, 3.5] factors everywhere"};
  opt.sweep.m_max = m_max;
  const RegularityMap screened = sweep_map(s.points, s.values, ev, opt, true);
  std::size_t target = 0, hit = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (full.points[i].estimate.s_tilde >= m_max - 0.5) continue;
    ++target;
    if (screened.points[i].status == PointStatus::ok && screened.points[i].estimate.s_tilde < m_max - 0.5) ++hit;
  }
  // Exact accounting: one order per point with non-zero data, two per outlier.
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const Stencil st = knn_stencil(s.points, ev[i], opt.n);
    const auto y = gather(s.values, st.indices);
    if (normalize_data(y).factor != 0.0) ++nonzero;
  }
  const std::size_t bound = ev.size() + 2 * screened.outliers.size();
  const std::size_t expected = nonzero + 2 * screened.outliers.size();
  const double recall = target ? static_cast<double>(hit) / static_cast<double>(target) : 1.0;
  const bool ok = target > 0 && recall >= 0.9 && screened.solves <= bound && screened.solves == expected;
  return {ok, fmt("m_max %.2f: recall %zu/%zu = %.2f, outliers %zu, solves %zu (expected %zu, bound %zu)", m_max, hit,
                  target, recall, screened.outliers.size(), screened.solves, expected, bound)};
}

// ------------------------------------------------------------------ 8

Outcome numerical_kernels() {
  double bessel = 0.0;
  for (double x : {0.01, 0.1, 0.5, 1.0, 2.5, 7.0, 20.0, 50.0}) {
    const double base = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    const double k12 = base, k32 = base * (1.0 + 1.0 / x), k52 = base * (1.0 + 3.0 / x + 3.0 / (x * x));
    bessel = std::max({bessel, std::fabs(special::bessel_k(0.5, x) / k12 - 1.0),
                       std::fabs(special::bessel_k(1.5, x) / k32 - 1.0), std::fabs(special::bessel_k(2.5, x) / k52 - 1.0)});
    for (double nu : {0.3, 1.2, 2.75, 4.1}) {
      const double lhs = special::bessel_k(nu + 1.0, x);
      const double rhs = special::bessel_k(nu - 1.0, x) + 2.0 * nu / x * special::bessel_k(nu, x);
      bessel = std::max(bessel, std::fabs(lhs / rhs - 1.0));
    }
  }

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> sites;
  std::vector<double> y;
  for (int i = 0; i < 30; ++i) {
    sites.push_back(make_point(u(rng), u(rng)));
    y.push_back(std::sin(3.0 * sites.back()[0]) + sites.back()[1]);
  }
  const KernelSpec spec{2.5, 2.0, 2};
  const Matrix a = kernel_matrix(spec, sites);
  Eigen::MatrixXd ea(30, 30);
  Eigen::VectorXd ey(30);
  for (int i = 0; i < 30; ++i) {
    ey(i) = y[i];
    for (int j = 0; j < 30; ++j) ea(i, j) = a(i, j);
  }
  const double oracle = std::sqrt(ey.dot(ea.partialPivLu().solve(ey)));
  const double eta = native_norm(spec, sites, y);
  const double native = std::fabs(eta / oracle - 1.0);

  const double th = 0.7;
  std::vector<Point> moved;
  for (const Point& p : sites) {
    moved.push_back(make_point(std::cos(th) * p[0] - std::sin(th) * p[1] + 3.0,
                               std::sin(th) * p[0] + std::cos(th) * p[1] - 1.5));
  }
  const double rigid = std::fabs(native_norm(spec, moved, y) / eta - 1.0);

  double fd = 0.0;
  const KernelSpec fspec{4.5, 3.0, 2};
  std::vector<Point> st(sites.begin(), sites.begin() + 15);
  const Point z = make_point(0.5, 0.5);
  for (const char* name : {"identity", "dx", "dy", "laplacian"}) {
    const DiffOperatorSpec op = DiffOperatorSpec::parse(name);
    const auto w = rbf_fd_weights(fspec, st, z, op);
    for (const Point& xk : st) {
      double applied = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < st.size(); ++j) {
        const double t = w[j] * kernel_eval(fspec, distance(st[j], xk));
        applied += t;
        scale += std::fabs(t);
      }
      const double exact = kernel_derivative(fspec, z, xk, op);
      fd = std::max(fd, std::fabs(applied - exact) / std::max(1.0, std::max(scale, std::fabs(exact))));
    }
  }
  const bool ok = bessel <= 1e-10 && native <= 1e-10 && rigid <= 1e-10 && fd <= 1e-8;
  return {ok, fmt("Bessel %.1e, native norm %.1e, rigid motion %.1e, RBF-FD exactness %.1e", bessel, native, rigid, fd)};
}

// ------------------------------------------------------------------ 9

std::string g_cli;
fs::path g_work = fs::current_path() / "acceptance_work";

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_scale() {
  if (g_cli.empty()) return {false, "no CLI binary given (--cli PATH)"};
  fs::create_directories(g_work);
  const std::string csv = (g_work / "scattered_100k.csv").string();
  const std::string out = (g_work / "scattered_100k_map.json").string();
  if (shell("'" + g_cli + "' gen --fn testfun2d --layout random --n 100000 --seed 11 --out '" + csv + "'") != 0) {
    return {false, "gen failed"};
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = shell("'" + g_cli + "' sweep --method screened --input '" + csv + "' --eps 4 --out '" + out + "'");
  const double elapsed = seconds_since(t0);
  if (rc != 0) return {false, fmt("sweep exited with %d", rc)};
  std::ifstream f(out);
  const nlohmann::json map = nlohmann::json::parse(f);
  std::size_t ok_points = 0;
  for (const auto& p : map["points"]) ok_points += p["status"] == "ok" ? 1 : 0;
  const std::size_t total = map["points"].size();
  const bool ok = total == 100000 && elapsed < 600.0 && 2 * ok_points >= total;
  return {ok, fmt("%zu points mapped in %.1f s, %zu estimated, %zu outliers, %zu solves", total, elapsed, ok_points,
                  map["outliers"].size(), map["solves"].get<std::size_t>())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else if (a == "--workdir" && i + 1 < argc) {
      g_work = argv[++i];
    } else {
      wanted.insert(std::atoi(a.c_str()));
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"tabulated 1D regularity values", tabulated_1d},
      {"step-data growth slope", step_growth_slope},
      {"1D regularity map structure", map_structure_1d},
      {"stencil-size trend", stencil_size_trend},
      {"stencil-shift reduction", stencil_shift},
      {"inverse inequality property suite", inverse_suite},
      {"sweep consistency", sweep_consistency},
      {"numerical kernels", numerical_kernels},
      {"CLI screened map at 100k points", cli_scale},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
