#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "regs/errors.hpp"

namespace regs::cli {

void DataSource::add_to(Params& p) {
  p.add("input", input, "CSV with columns x1..xd,value");
  p.add("dim", dim, "coordinate columns in the CSV (0: all but the last)");
  p.add("fn", fn, "synthetic data: testfun1d, testfun2d, step, kink1, kink2");
  p.add("layout", layout, "synthetic sites: grid, halton, random");
  p.add("points", points, "number of synthetic sites");
  p.add("seed", seed, "seed for random layouts");
  p.add("skip", skip, "leading Halton indices to skip");
}

data::Sample DataSource::load() const {
  if (!input.empty() && !fn.empty()) throw UsageError("give either --input or --fn, not both");
  if (!input.empty()) {
    Dataset d = read_csv(input, dim);
    if (d.values.empty()) throw DataError(input, 1, "no value column");
    return {std::move(d.points), std::move(d.values)};
  }
  if (fn.empty()) throw UsageError("no data: give --input FILE or --fn NAME");
  const data::Generator g = data::parse_generator(fn);
  return data::sample(g, data::parse_layout(layout), points, data::default_box(g), seed, skip);
}

namespace {

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

}  // namespace

std::vector<Point> eval_points(const std::string& spec, const PointSet& ps) {
  const int d = ps.dim();
  if (spec.empty() || spec == "sites") return {ps.points().begin(), ps.points().end()};
  if (spec.rfind("at:", 0) == 0) {
    std::vector<Point> out;
    std::stringstream ss(spec.substr(3));
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto v = parse_numbers(item, ',');
      if (static_cast<int>(v.size()) != d) throw UsageError("evaluation point '" + item + "' needs " + std::to_string(d) + " coordinates");
      Point p{};
      for (int k = 0; k < d; ++k) p[k] = v[k];
      out.push_back(p);
    }
    if (out.empty()) throw UsageError("no evaluation points in '" + spec + "'");
    return out;
  }
  if (spec.rfind("grid:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(5), ',');
    if (v.size() != 1 || v[0] < 2 || v[0] != std::floor(v[0])) throw UsageError("grid evaluation needs grid:K with K >= 2");
    const auto k = static_cast<std::size_t>(v[0]);
    Point lo = ps[0], hi = ps[0];
    for (const Point& p : ps.points())
      for (int j = 0; j < d; ++j) {
        lo[j] = std::min(lo[j], p[j]);
        hi[j] = std::max(hi[j], p[j]);
      }
    std::vector<Point> out;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= k;
    for (std::size_t idx = 0; idx < total; ++idx) {
      Point p{};
      std::size_t r = idx;
      for (int j = 0; j < d; ++j) {
        const std::size_t c = r % k;
        r /= k;
        p[j] = lo[j] + (hi[j] - lo[j]) * static_cast<double>(c) / static_cast<double>(k - 1);
      }
      out.push_back(p);
    }
    return out;
  }
  const Dataset e = read_csv(spec, d);
  if (e.points.dim() != d) throw DataError(spec, 1, "evaluation points must have " + std::to_string(d) + " coordinates");
  return {e.points.points().begin(), e.points.points().end()};
}

json point_json(const Point& z, int d) {
  json a = json::array();
  for (int k = 0; k < d; ++k) a.push_back(z[k]);
  return a;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json estimate_json(const RegularityEstimate& e) {
  json j;
  j["case"] = to_string(e.kind);
  j["s_tilde"] = e.s_tilde;
  j["m_star"] = e.m_star ? json(*e.m_star) : json(nullptr);
  j["reliable"] = e.reliable;
  j["q"] = e.q;
  j["n"] = e.n;
  j["slope"] = number_or_null(e.slopes.fit_slope);
  j["r2"] = number_or_null(e.slopes.r2);
  j["pre_slope"] = number_or_null(e.slopes.pre);
  j["post_slope"] = number_or_null(e.slopes.post);
  j["rho_ref"] = number_or_null(e.slopes.rho_ref);
  return j;
}

json map_json(const RegularityMap& map, int d) {
  json pts = json::array();
  for (const MapPoint& p : map.points) {
    json j = estimate_json(p.estimate);
    j["z"] = point_json(p.z, d);
    j["method"] = to_string(map.method);
    if (p.status != PointStatus::ok) j["s_tilde"] = nullptr;
    j["status"] = p.status == PointStatus::ok ? "ok" : "failed";
    if (!p.error.empty()) j["error"] = p.error;
    j["log_eta_max"] = number_or_null(p.log_eta_max);
    if (p.sweep) {
      j["m_hat"] = p.sweep->m_hat ? json(*p.sweep->m_hat) : json(nullptr);
      j["secant_slope"] = number_or_null(p.sweep->slope);
    }
    pts.push_back(std::move(j));
  }
  json out;
  out["kind"] = "map";
  out["method"] = to_string(map.method);
  out["d"] = d;
  out["solves"] = map.solves;
  out["outliers"] = map.outliers;
  out["points"] = std::move(pts);
  return out;
}

double json_number(const json& j) { return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN(); }

RegularityEstimate estimate_from_json(const json& j) {
  RegularityEstimate e;
  e.kind = parse_case(j.at("case").get<std::string>());
  e.s_tilde = json_number(j.at("s_tilde"));
  if (j.contains("m_star") && j["m_star"].is_number()) e.m_star = j["m_star"].get<double>();
  e.reliable = j.value("reliable", true);
  e.q = json_number(j.value("q", json(nullptr)));
  e.n = j.value("n", std::size_t{0});
  e.slopes.fit_slope = json_number(j.value("slope", json(nullptr)));
  e.slopes.r2 = json_number(j.value("r2", json(nullptr)));
  e.slopes.pre = json_number(j.value("pre_slope", json(nullptr)));
  e.slopes.post = json_number(j.value("post_slope", json(nullptr)));
  e.slopes.rho_ref = json_number(j.value("rho_ref", json(nullptr)));
  return e;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(path, 0, "cannot open for writing");
  f << text;
  if (!f) throw DataError(path, 0, "write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path, 0, "cannot open");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw DataError(path, 0, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace regs::cli
