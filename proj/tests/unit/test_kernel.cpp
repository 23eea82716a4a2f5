#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "regs/errors.hpp"
#include "regs/kernel.hpp"

using namespace regs;

namespace {

std::vector<Point> line(std::size_t n, double a, double b) {
  std::vector<Point> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(make_point(a + (b - a) * double(i) / double(n - 1)));
  return p;
}

}  // namespace

TEST_CASE("kernel_eval values") {
  CHECK(kernel_eval({1.5, 1.0, 1}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_eval({1.0, 1.0, 1}, 1.0) == doctest::Approx(0.4610685044478945584396).epsilon(1e-13));
  // nu = 1.5 at eps r = 1: 1^1.5 K_1.5(1).
  CHECK(kernel_eval({2.5, 2.0, 2}, 0.5) == doctest::Approx(0.9221370088957891168792).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_eval({0.5, 1.0, 1}, 1.0), InvalidSpecError);
  CHECK_THROWS_AS(kernel_eval({1.5, 0.0, 1}, 1.0), InvalidSpecError);
}

TEST_CASE("kernel_matrix structure") {
  const KernelSpec s{1.5, 1.0, 1};
  const std::vector<Point> one{make_point(0.3)};
  CHECK(kernel_matrix(s, one)(0, 0) == doctest::Approx(1.0));
  const std::vector<Point> two{make_point(0.0), make_point(1.0)};
  const Matrix a = kernel_matrix(s, two);
  CHECK(a(0, 1) == doctest::Approx(0.6019072301972345747375).epsilon(1e-13));
  CHECK(a(0, 1) == a(1, 0));
  const std::vector<Point> dup{make_point(0.0), make_point(1.0), make_point(0.0)};
  CHECK_THROWS_AS(kernel_matrix(s, dup), DuplicateSiteError);
}

TEST_CASE("rigid motions leave the kernel matrix and eta unchanged") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> p, q;
  const double th = 0.7, c = std::cos(th), s = std::sin(th);
  std::vector<double> y;
  for (int i = 0; i < 15; ++i) {
    const double x0 = u(rng), x1 = u(rng);
    p.push_back(make_point(x0, x1));
    q.push_back(make_point(c * x0 - s * x1 + 3.0, s * x0 + c * x1 - 1.5));
    y.push_back(std::sin(3 * x0) + x1);
  }
  const KernelSpec k{2.5, 3.0, 2};
  const Matrix a = kernel_matrix(k, p), b = kernel_matrix(k, q);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::fabs(a(i, j) - b(i, j)) < 1e-12);
  const double e1 = native_norm(k, p, y), e2 = native_norm(k, q, y);
  CHECK(std::fabs(e1 - e2) <= 1e-10 * e1);
}

TEST_CASE("interpolant solve and evaluation") {
  const KernelSpec s{2.0, 1.0, 1};
  const auto x = line(5, -1.0, 1.0);
  std::vector<double> y;
  for (const auto& p : x) y.push_back(p[0]);
  const auto c = solve_interpolant(s, x, y);
  const auto r = kernel_matrix(s, x).multiply(c.alpha);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::fabs(r[i] - y[i]) < 1e-12);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(evaluate_interpolant(c, x[i]) == doctest::Approx(y[i]).epsilon(1e-10));

  const auto zero = solve_interpolant(s, x, std::vector<double>(5, 0.0));
  for (double a : zero.alpha) CHECK(a == 0.0);
  CHECK(evaluate_interpolant(zero, make_point(0.123)) == 0.0);

  const std::vector<Point> single{make_point(0.0)};
  const std::vector<double> y1{3.0};
  const KernelSpec s1{1.5, 1.0, 1};
  CHECK(solve_interpolant(s1, single, y1).alpha[0] == doctest::Approx(3.0));

  const std::vector<Point> pair{make_point(0.0), make_point(1.0)};
  const std::vector<double> ya{1.0, 2.0}, yb{2.0, 1.0};
  const double ua = evaluate_interpolant(solve_interpolant(s, pair, ya), make_point(0.5));
  const double ub = evaluate_interpolant(solve_interpolant(s, pair, yb), make_point(0.5));
  CHECK(ua == doctest::Approx(ub).epsilon(1e-14));
}

TEST_CASE("native_norm against a dense LU oracle") {
  const KernelSpec s{1.5, 1.0, 1};
  const std::vector<Point> one{make_point(0.0)};
  const std::vector<double> y1{1.0};
  CHECK(native_norm(s, one, y1) == doctest::Approx(1.0).epsilon(1e-15));

  const auto x = line(3, -0.1, 0.1);
  const std::vector<double> step{0.0, 1.0, 1.0};
  for (double m : {0.8, 1.5, 2.5, 3.5}) {
    const KernelSpec k{m, 1.0, 1};
    const double oracle = std::sqrt(testing::lu_quadratic(kernel_matrix(k, x), step));
    CHECK(std::fabs(native_norm(k, x, step) - oracle) <= 1e-10 * oracle);
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> p;
  std::vector<double> y;
  for (int i = 0; i < 30; ++i) {
    p.push_back(make_point(u(rng), u(rng)));
    y.push_back(u(rng));
  }
  const KernelSpec k2{2.0, 4.0, 2};
  const double eta = native_norm(k2, p, y);
  const double oracle = std::sqrt(testing::lu_quadratic(kernel_matrix(k2, p), y));
  CHECK(std::fabs(eta - oracle) <= 1e-10 * oracle);

  std::vector<double> y3(y);
  for (double& v : y3) v *= -3.0;
  CHECK(native_norm(k2, p, y3) == doctest::Approx(3.0 * eta).epsilon(1e-13));
}

TEST_CASE("lambda_min") {
  const KernelSpec s{1.5, 1.0, 1};
  const std::vector<Point> one{make_point(0.0)};
  CHECK(lambda_min(s, one) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Point> two{make_point(0.0), make_point(1.0)};
  CHECK(lambda_min(s, two, {1e-12, 500}) == doctest::Approx(1.0 - 0.6019072301972345747375).epsilon(1e-9));

  const auto x = line(11, -1.0, 1.0);
  for (double m : {1.0, 2.0, 3.0}) {
    const KernelSpec k{m, 1.0, 1};
    const Eigen::MatrixXd a = testing::to_eigen(kernel_matrix(k, x));
    const double oracle = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues()(0);
    CHECK(lambda_min(k, x, {1e-10, 5000}) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("factorization failure is reported") {
  const auto x = line(40, 0.0, 0.01);
  std::vector<double> y(40, 1.0);
  CHECK_THROWS_AS(native_norm({4.0, 1.0, 1}, x, y), FactorizationError);
}
