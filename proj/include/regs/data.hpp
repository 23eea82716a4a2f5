#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regs/geometry.hpp"

namespace regs::data {

// Piecewise benchmark on [-1, 1]: jumps at -0.8, -0.4, 0 and 0.5, a C^1
// junction at -0.6 and a kink at -0.2. Throws DomainError outside [-1, 1].
double testfun_1d(double x);

// Composite benchmark on [0, 6]^2 with a ridge, a cusp, a cone, an
// oscillatory disk and plateau edges. Branches are tested in listed order and
// the first match wins. Throws DomainError outside the square.
double testfun_2d(double x, double y);

enum class Antiderivative { step, kink1, kink2 };

// step = 1_{x > 0}, kink1 = max(x, 0), kink2 = max(x, 0)^2 / 2.
double antiderivative_family(Antiderivative kind, double x);

enum class Generator { testfun1d, testfun2d, step, kink1, kink2 };
enum class Layout { uniform_grid, halton, uniform_random };

Generator parse_generator(const std::string& name);
Layout parse_layout(const std::string& name);
int generator_dim(Generator g);
Box default_box(Generator g);

double evaluate(Generator g, const Point& p);

struct Sample {
  PointSet points;
  std::vector<double> values;
};

// uniform_grid places round(n^(1/d)) nodes per axis including the box faces,
// so in 1D it is exactly n equispaced nodes. uniform_random is driven by a
// 64-bit Mersenne twister seeded with `seed`.
Sample sample(Generator g, Layout layout, std::size_t n, const Box& box, std::uint64_t seed = 0,
              std::size_t halton_skip = 0);

std::vector<double> evaluate_all(Generator g, const PointSet& ps);

}  // namespace regs::data
