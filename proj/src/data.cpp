#include "regs/data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "regs/errors.hpp"

namespace regs::data {

double testfun_1d(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("testfun_1d: x outside [-1, 1]");
  constexpr double pi = std::numbers::pi;
  if (x < -0.8) return 0.8;
  if (x < -0.6) return 1.2;
  if (x < -0.4) return 1.2 + 100.0 * (x + 0.6) * (x + 0.6);
  if (x < 0.0) return 5.0 * std::fabs(5.0 * x + 1.0) + 4.0;
  if (x < 0.5) return 6.0 + 3.0 * std::sin(24.0 * pi * x);
  return 2.0 + std::sin(6.0 * pi * x);
}

double testfun_2d(double x, double y) {
  if (!(x >= 0.0 && x <= 6.0 && y >= 0.0 && y <= 6.0)) {
    throw DomainError("testfun_2d: point outside [0, 6]^2");
  }
  constexpr double pi = std::numbers::pi;
  const double r1 = std::hypot(x - 1.5, y - 4.5);
  const double r2 = std::hypot(x - 4.5, y - 2.0);
  const double r3 = std::hypot(x - 3.5, y - 3.5);
  if (std::fabs(x - 2.25) + std::fabs(y - 2.25) <= 1.75) {
    return -0.01 * std::sin(4.0 * pi * x) * std::cos(4.0 * pi * y) + std::exp(-2.0 * r2) +
           0.2 * (x + y - 2.75);
  }
  const double ridge = std::fabs(x - std::sin(y) - 4.5);
  if (ridge <= 0.3) return 0.4 * (1.0 - ridge / 0.3);
  if (r1 <= 0.5) return 1.0 - 2.0 * r1;
  if (x >= 2.5 && x <= 4.5 && y >= 2.5 && y <= 4.5 && r3 <= 1.0) {
    return 0.5 * std::sin(20.0 * r3) / (1.0 + 3.0 * r3);
  }
  if (x >= 0.5 && x <= 5.5 && y >= 0.5 && y <= 5.5) return 0.25;
  return 0.0;
}

double antiderivative_family(Antiderivative kind, double x) {
  if (x <= 0.0) return 0.0;
  switch (kind) {
    case Antiderivative::step: return 1.0;
    case Antiderivative::kink1: return x;
    case Antiderivative::kink2: return 0.5 * x * x;
  }
  return 0.0;
}

Generator parse_generator(const std::string& name) {
  if (name == "testfun1d") return Generator::testfun1d;
  if (name == "testfun2d") return Generator::testfun2d;
  if (name == "step") return Generator::step;
  if (name == "kink1") return Generator::kink1;
  if (name == "kink2") return Generator::kink2;
  throw InvalidSpecError("unknown generator '" + name + "'");
}

Layout parse_layout(const std::string& name) {
  if (name == "grid" || name == "uniform_grid") return Layout::uniform_grid;
  if (name == "halton") return Layout::halton;
  if (name == "random" || name == "uniform_random") return Layout::uniform_random;
  throw InvalidSpecError("unknown layout '" + name + "'");
}

int generator_dim(Generator g) { return g == Generator::testfun2d ? 2 : 1; }

Box default_box(Generator g) {
  Box b;
  if (g == Generator::testfun2d) {
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {6.0, 6.0, 0.0};
  } else {
    b.lo = {-1.0, 0.0, 0.0};
    b.hi = {1.0, 0.0, 0.0};
  }
  return b;
}

double evaluate(Generator g, const Point& p) {
  switch (g) {
    case Generator::testfun1d: return testfun_1d(p[0]);
    case Generator::testfun2d: return testfun_2d(p[0], p[1]);
    case Generator::step: return antiderivative_family(Antiderivative::step, p[0]);
    case Generator::kink1: return antiderivative_family(Antiderivative::kink1, p[0]);
    case Generator::kink2: return antiderivative_family(Antiderivative::kink2, p[0]);
  }
  return 0.0;
}

std::vector<double> evaluate_all(Generator g, const PointSet& ps) {
  std::vector<double> v(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) v[i] = evaluate(g, ps[i]);
  return v;
}

namespace {

double lerp_node(double lo, double hi, std::size_t i, std::size_t count) {
  if (count == 1) return 0.5 * (lo + hi);
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

Sample sample(Generator g, Layout layout, std::size_t n, const Box& box, std::uint64_t seed,
              std::size_t halton_skip) {
  const int d = generator_dim(g);
  std::vector<Point> pts;
  switch (layout) {
    case Layout::uniform_grid: {
      const auto per = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / d)));
      const std::size_t ny = d == 2 ? per : 1;
      const std::size_t nx = d == 2 ? per : n;
      for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
          Point p{lerp_node(box.lo[0], box.hi[0], i, nx), 0.0, 0.0};
          if (d == 2) p[1] = lerp_node(box.lo[1], box.hi[1], j, ny);
          pts.push_back(p);
        }
      }
      break;
    }
    case Layout::halton: {
      PointSet h = halton(n, d, halton_skip, box);
      pts.assign(h.points().begin(), h.points().end());
      break;
    }
    case Layout::uniform_random: {
      std::mt19937_64 rng(seed);
      pts.resize(n, Point{0.0, 0.0, 0.0});
      for (auto& p : pts) {
        for (int k = 0; k < d; ++k) {
          // 53 random mantissa bits; avoids the implementation-defined
          // std::uniform_real_distribution so streams match across libraries.
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          p[k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
        }
      }
      break;
    }
  }
  Sample s;
  s.points = PointSet(d, std::move(pts));
  s.values = evaluate_all(g, s.points);
  return s;
}

}  // namespace regs::data
