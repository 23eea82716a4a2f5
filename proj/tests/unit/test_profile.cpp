#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "regs/errors.hpp"
#include "regs/kernel.hpp"
#include "regs/profile.hpp"

using namespace regs;

namespace {

std::vector<Point> grid1d(std::size_t n, double h) {
  std::vector<Point> p;
  const double x0 = -0.5 * h * double(n - 1);
  for (std::size_t i = 0; i < n; ++i) p.push_back(make_point(x0 + h * double(i)));
  return p;
}

NormProfile synthetic(const MGrid& g, double knee, double s1, double s2) {
  NormProfile p;
  p.grid = g;
  p.q = 0.05;
  p.n = 20;
  p.normalization = 1.0;
  for (double m : g.values) {
    const double l = m < knee ? s1 * (m - g.m_min) : s1 * (knee - g.m_min) + s2 * (m - knee);
    p.eta.push_back(std::exp(l));
    p.saturated.push_back(false);
  }
  return p;
}

}  // namespace

TEST_CASE("order grid") {
  const MGrid g = MGrid::make(0.6, 3.5, 0.025);
  CHECK(g.size() == 117);
  CHECK(g.values.back() == doctest::Approx(3.5));
  CHECK(MGrid::parse("1.1:5:0.05").size() == 79);
  CHECK_THROWS_AS(MGrid::parse("1:2"), InvalidSpecError);
  CHECK_THROWS_AS(MGrid::make(1, 2, 0), InvalidSpecError);
  CHECK(MGrid::default_for(2).m_min == 1.1);
}

TEST_CASE("normalize_data") {
  const std::vector<double> a{2, 2, 2}, z{0, 0}, alt{1, -1, 1, -1};
  const Normalized na = normalize_data(a);
  CHECK(na.factor == 2.0);
  CHECK(na.y == std::vector<double>{1, 1, 1});
  const Normalized nz = normalize_data(z);
  CHECK(nz.factor == 0.0);
  CHECK(nz.y == z);
  const Normalized nalt = normalize_data(alt);
  CHECK(nalt.factor == 1.0);
  CHECK(nalt.y == alt);
}

TEST_CASE("compute_profile trivial cases") {
  const auto x = grid1d(5, 0.1);
  const std::vector<double> zero(5, 0.0);
  const NormProfile p0 = compute_profile(x, zero, 1, MGrid::make(0.6, 1.0, 0.1), EpsPolicy{});
  for (double e : p0.eta) CHECK(e == 0.0);
  CHECK(p0.zero_data());

  const std::vector<Point> one{make_point(0.0)};
  const std::vector<double> y{4.0};
  const NormProfile p1 = compute_profile(one, y, 1, MGrid::make(1.5, 1.5, 0.1), EpsPolicy{});
  REQUIRE(p1.eta.size() == 1);
  CHECK(p1.eta[0] == doctest::Approx(1.0 / std::sqrt(kernel_eval({1.5, 1.0, 1}, 0.0))));
  CHECK_THROWS_AS(compute_profile(one, y, 1, MGrid::make(0.4, 1.0, 0.1), EpsPolicy{}), InvalidSpecError);
}

TEST_CASE("step data grows steadily but no faster than the reference rate") {
  const auto x = grid1d(21, 0.1);
  std::vector<double> y;
  for (const auto& p : x) y.push_back(p[0] > 0 ? 1.0 : 0.0);
  const NormProfile p = compute_profile(x, y, 1, MGrid::make(2.0, 4.0, 0.025), EpsPolicy{});
  std::vector<double> ms, ls;
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    if (p.saturated[k]) continue;
    ms.push_back(p.grid.values[k]);
    ls.push_back(std::log(p.eta[k]));
  }
  REQUIRE(ms.size() > 10);
  const double rate = reference_rate(0.05);
  CHECK(rate == doctest::Approx(std::log(std::numbers::pi / 0.1)));
  const LineFit fit = fit_line(ms, ls);
  CHECK(fit.r2 > 0.999);
  CHECK(fit.slope > 0.5 * rate);
  CHECK(fit.slope < rate);
}

TEST_CASE("elbow on synthetic profiles") {
  const MGrid g = MGrid::make(0.6, 3.5, 0.025);
  const NormProfile lin = synthetic(g, 10.0, 1.0, 1.0);
  const ElbowResult e0 = elbow(lin);
  for (double k : e0.curvature)
    if (!std::isnan(k)) CHECK(k < 1e-9);
  const ElbowResult e = elbow(synthetic(g, 1.5, 0.1, 3.0));
  CHECK(std::fabs(e.m_star - 1.5) <= 0.025 + 1e-12);
  NormProfile short_p = synthetic(MGrid::make(1, 1.075, 0.025), 2, 1, 1);
  CHECK_THROWS_AS(elbow(short_p), InsufficientPointsError);
}

TEST_CASE("classify cases") {
  const MGrid g = MGrid::make(0.6, 3.5, 0.025);
  const double rho = reference_rate(0.05);
  const RegularityEstimate worst = classify(synthetic(g, 10, rho, rho), {});
  CHECK(worst.kind == RegularityCase::worst_case);
  CHECK(worst.s_tilde == g.m_min);
  const RegularityEstimate smooth = classify(synthetic(g, 10, 0.1 * rho, 0.1), {});
  CHECK(smooth.kind == RegularityCase::smooth);
  CHECK(smooth.s_tilde == g.m_max);
  const RegularityEstimate el = classify(synthetic(g, 2.0, 0.2, 0.9 * rho), {});
  CHECK(el.kind == RegularityCase::elbow);
  CHECK(std::fabs(el.s_tilde - 2.0) <= 0.025 + 1e-12);
  REQUIRE(el.m_star);

  NormProfile sat = synthetic(g, 2.0, 0.2, 0.9 * rho);
  for (std::size_t k = 60; k < g.size(); ++k) {
    sat.saturated[k] = true;
    sat.eta[k] = NAN;
  }
  CHECK_FALSE(classify(sat, {}).reliable);
  CHECK(parse_case(to_string(RegularityCase::elbow)) == RegularityCase::elbow);
}

TEST_CASE("classify on sampled data") {
  const auto x = grid1d(20, 0.001);
  std::vector<double> step, smooth;
  for (const auto& p : x) {
    step.push_back(p[0] > 0 ? 1.0 : 0.0);
    smooth.push_back(std::sin(2 * p[0]) + 2.0);
  }
  const MGrid g = MGrid::default_for(1);
  const RegularityEstimate es = classify(compute_profile(x, step, 1, g, EpsPolicy{}), {});
  CHECK(es.kind == RegularityCase::worst_case);
  CHECK(es.s_tilde == g.m_min);
  const RegularityEstimate en = classify(compute_profile(x, smooth, 1, g, EpsPolicy{}), {});
  CHECK(en.kind == RegularityCase::smooth);
  CHECK(en.s_tilde == g.m_max);
}

TEST_CASE("eps policies and csv") {
  CHECK(EpsPolicy::parse("m", 1).at(2.5) == 2.5);
  CHECK(EpsPolicy::parse("1/m", 1).at(2.0) == 0.5);
  CHECK(EpsPolicy::parse("constant", 0.7).at(9.0) == 0.7);
  CHECK_THROWS_AS(EpsPolicy::parse("x", 1), InvalidSpecError);
  const auto x = grid1d(3, 0.1);
  const std::vector<double> y{0, 1, 1};
  const std::string csv = profile_csv(compute_profile(x, y, 1, MGrid::make(1, 1.1, 0.1), EpsPolicy{}));
  CHECK(csv.rfind("m,eta,log_eta\n1,", 0) == 0);
}
