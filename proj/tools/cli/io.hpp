#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "params.hpp"
#include "regs/data.hpp"
#include "regs/geometry.hpp"
#include "regs/profile.hpp"
#include "regs/sweep.hpp"

namespace regs::cli {

// Scattered data from a CSV file or from one of the built-in generators.
struct DataSource {
  std::string input;
  int dim = 0;
  std::string fn;
  std::string layout = "halton";
  std::size_t points = 2000;
  std::uint64_t seed = 0;
  std::size_t skip = 0;

  void add_to(Params& p);
  data::Sample load() const;
};

// "sites", "grid:K" (K nodes per axis over the bounding box), "at:x[,y];..."
// or a CSV file whose first d columns are coordinates.
std::vector<Point> eval_points(const std::string& spec, const PointSet& ps);

json point_json(const Point& z, int d);
json estimate_json(const RegularityEstimate& e);
json map_json(const RegularityMap& map, int d);
// Inverse of the per-point fields written by estimate_json; a null s_tilde
// reads back as NaN.
RegularityEstimate estimate_from_json(const json& j);
double json_number(const json& j);

void write_output(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
json read_json(const std::string& path);

}  // namespace regs::cli
