#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "io.hpp"
#include "regs/bandlimited.hpp"
#include "regs/data.hpp"
#include "regs/errors.hpp"
#include "regs/parallel.hpp"
#include "regs/profile.hpp"
#include "regs/rbffd.hpp"
#include "regs/refine.hpp"
#include "regs/sweep.hpp"

namespace regs::cli {

Command::Command(CLI::App& parent, const std::string& name, const std::string& help)
    : app_(parent.add_subcommand(name, help)), params_(app_) {
  app_->add_option("--config", config_path_, "JSON config file; command-line flags take precedence");
  params_.add("out", out_, "output file ('-' or empty: standard output)");
}

void Command::execute() {
  const json cfg = config_path_.empty() ? json(nullptr) : read_json(config_path_);
  run(cfg);
}

json Command::report(const std::string& kind) const {
  json j;
  j["kind"] = kind;
  j["config"] = params_.effective();
  return j;
}

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int order_of(int order) {
  if (order < 0 || order > 2) throw UsageError("--order must be 0, 1 or 2");
  return order;
}

// Stencil, kernel and classification settings shared by the estimating
// commands.
struct EstimationArgs {
  std::size_t n = 20;
  double eps = 1.0;
  std::string eps_rule = "constant";
  std::string grid;  // empty: default for the dimension
  double m_max = 0.0;  // sweeps; 0 uses the top of the grid
  double delta = 0.25;
  double iqr_k = 1.5;
  double smooth_fraction = 0.4;
  double r2_min = 0.98;
  double worst_fraction = 0.7;
  double elbow_contrast = 3.0;
  double max_saturated = 0.2;
  double pivot_floor = 1e-12;
  bool jitter = false;
  unsigned threads = 0;

  void add_to(Params& p) {
    p.add("n", n, "stencil size");
    p.add("eps", eps, "kernel shape parameter");
    p.add("eps_rule", eps_rule, "constant, m or 1/m");
    p.add("grid", grid, "order grid min:max:step (default 0.6:3.5:0.025 in 1D, 1.1:5.0:0.05 otherwise)");
    p.add("m_max", m_max, "top order of the two-point sweep (0: top of the grid)");
    p.add("delta", delta, "order gap of the two-point secant");
    p.add("iqr_k", iqr_k, "IQR fence multiplier of the screen");
    p.add("smooth_fraction", smooth_fraction, "slope fraction below which data count as smooth");
    p.add("r2_min", r2_min, "R^2 above which a profile is a straight line");
    p.add("worst_fraction", worst_fraction, "slope fraction above which a line is worst case");
    p.add("elbow_contrast", elbow_contrast, "post/pre slope ratio required for an elbow");
    p.add("max_saturated", max_saturated, "largest fraction of failed orders before an estimate is unreliable");
    p.add("pivot_floor", pivot_floor, "relative Cholesky pivot floor");
    p.add_flag("jitter", jitter, "retry failed factorizations once with a tiny ridge");
    p.add("threads", threads, "worker threads (0: all cores; REGS_THREADS overrides)");
  }

  MGrid make_grid(int d) const {
    if (n < 2) throw UsageError("--n must be at least 2");
    return grid.empty() ? MGrid::default_for(d) : MGrid::parse(grid);
  }
  EpsPolicy eps_policy() const { return EpsPolicy::parse(eps_rule, eps); }
  FactorOptions factor() const { return {pivot_floor, jitter}; }
  ClassifyThresholds thresholds() const {
    return {r2_min, worst_fraction, smooth_fraction, elbow_contrast, max_saturated};
  }
  MapOptions map_options(int d) const {
    MapOptions o;
    o.n = n;
    o.threads = threads;
    o.grid = make_grid(d);
    o.thresholds = thresholds();
    o.sweep.m_max = m_max > 0.0 ? m_max : o.grid.values.back();
    o.sweep.delta = delta;
    o.sweep.smooth_fraction = smooth_fraction;
    o.sweep.iqr_k = iqr_k;
    o.sweep.eps = eps_policy();
    o.sweep.factor = factor();
    o.sweep.validate(d);
    return o;
  }
};

// ---------------------------------------------------------------- gen

class GenCommand : public Command {
 public:
  explicit GenCommand(CLI::App& app) : Command(app, "gen", "write a synthetic dataset as CSV") {
    params_.add("fn", fn_, "testfun1d, testfun2d, step, kink1, kink2");
    params_.add("layout", layout_, "grid, halton or random");
    params_.add("n", n_, "number of sites");
    params_.add("seed", seed_, "seed for the random layout");
    params_.add("skip", skip_, "leading Halton indices to skip");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "gen");
    if (n_ == 0) throw UsageError("--n must be positive");
    const data::Generator g = data::parse_generator(fn_);
    const data::Sample s = data::sample(g, data::parse_layout(layout_), n_, data::default_box(g), seed_, skip_);
    std::string text;
    for (int k = 0; k < s.points.dim(); ++k) text += "x" + std::to_string(k + 1) + ",";
    text += "value\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      for (int k = 0; k < s.points.dim(); ++k) text += format_double(s.points[i][k]) + ",";
      text += format_double(s.values[i]) + "\n";
    }
    write_output(out_, text);
  }

 private:
  std::string fn_ = "testfun1d";
  std::string layout_ = "grid";
  std::size_t n_ = 2000;
  std::uint64_t seed_ = 0;
  std::size_t skip_ = 0;
};

// ---------------------------------------------------------------- profile

json profile_points_json(const NormProfile& prof) {
  json m = json::array(), ln = json::array();
  for (std::size_t k = 0; k < prof.grid.size(); ++k) {
    m.push_back(prof.grid.values[k]);
    ln.push_back(prof.saturated[k] || !(prof.eta[k] > 0.0) ? json(nullptr) : json(std::log(prof.eta[k])));
  }
  json j;
  j["m"] = std::move(m);
  j["ln_eta"] = std::move(ln);
  j["saturated"] = prof.saturated_count();
  j["normalization"] = prof.normalization;
  return j;
}

class ProfileCommand : public Command {
 public:
  explicit ProfileCommand(CLI::App& app)
      : Command(app, "profile", "norm profile eta(m) and regularity estimate at given points") {
    src_.add_to(params_);
    est_.add_to(params_);
    params_.add("z", z_, "evaluation point(s): x[,y[,z]] separated by ';'");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "profile");
    if (z_.empty()) throw UsageError("--z is required");
    const data::Sample s = src_.load();
    const int d = s.points.dim();
    const auto zs = eval_points("at:" + z_, s.points);
    const MGrid grid = est_.make_grid(d);
    const EpsPolicy eps = est_.eps_policy();
    json pts = json::array();
    std::size_t solves = 0;
    for (const Point& z : zs) {
      const Stencil st = knn_stencil(s.points, z, est_.n);
      const NormProfile prof = compute_profile(s.points, st, s.values, grid, eps, est_.factor());
      solves += grid.size();
      const RegularityEstimate e = classify(prof, est_.thresholds());
      json j = estimate_json(e);
      j["z"] = point_json(z, d);
      j["method"] = "dense";
      j["profile"] = profile_points_json(prof);
      pts.push_back(std::move(j));
    }
    json r = report("profile");
    r["d"] = d;
    r["method"] = "dense";
    r["solves"] = solves;
    r["points"] = std::move(pts);
    write_output(out_, dump(r));
  }

 private:
  DataSource src_;
  EstimationArgs est_;
  std::string z_;
};

// ---------------------------------------------------------------- map, sweep

class MapCommand : public Command {
 public:
  MapCommand(CLI::App& app, const std::string& name, const std::string& help, std::string method)
      : Command(app, name, help), name_(name), method_(std::move(method)) {
    src_.add_to(params_);
    est_.add_to(params_);
    params_.add("method", method_, name == "map" ? "dense, two_point or screened" : "two_point or screened");
    params_.add("eval", eval_, "evaluation points: sites, grid:K, at:x;..., or a CSV file");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, name_);
    const MapMethod method = parse_method(method_);
    if (name_ == "sweep" && method == MapMethod::dense) throw UsageError("--method for sweep must be two_point or screened");
    const data::Sample s = src_.load();
    const int d = s.points.dim();
    const auto zs = eval_points(eval_, s.points);
    const MapOptions opt = est_.map_options(d);
    const RegularityMap map = regularity_map(method, s.points, s.values, zs, opt);
    json r = map_json(map, d);
    r["config"] = params_.effective();
    r["m_max"] = method == MapMethod::dense ? opt.grid.values.back() : opt.sweep.m_max;
    write_output(out_, dump(r));
  }

 private:
  std::string name_;
  std::string method_;
  DataSource src_;
  EstimationArgs est_;
  std::string eval_ = "sites";
};

// Keys of a stored map's config that describe how it was built; a
// downstream command reuses them unless overridden.
const std::vector<std::string> kNotInherited = {"out", "config", "map", "eval", "method", "order", "flags"};

json load_map(const std::string& path) {
  if (path.empty()) throw UsageError("--map is required");
  json m = read_json(path);
  if (!m.is_object() || m.value("kind", "") != "map" || !m.contains("points") || !m.contains("d")) {
    throw DataError(path, 0, "not a regularity map");
  }
  return m;
}

// s-tilde used to flag a map point for derivatives of the given order.
double flag_value(const json& p, int order) {
  if (p.contains("s_tilde_by_order")) return json_number(p["s_tilde_by_order"].at(order));
  return json_number(p.at("s_tilde"));
}

std::vector<double> flag_values(const json& map, int order) {
  std::vector<double> v;
  for (const json& p : map["points"]) v.push_back(flag_value(p, order));
  return v;
}

// ---------------------------------------------------------------- refine

class RefineCommand : public Command {
 public:
  explicit RefineCommand(CLI::App& app) : Command(app, "refine", "stencil-shift post-pass over a regularity map") {
    app_->add_option("--map", map_path_, "regularity map written by map or sweep")->required();
    src_.add_to(params_);
    est_.add_to(params_);
    params_.add("offsets", offsets_, "trial shift lengths");
    params_.add("unit", unit_, "unit of the offsets: q or rho");
    params_.add("c", c_, "interior margin in candidate spacings (negative: 0, 1, 2 for orders 0, 1, 2)");
    params_.add("guard", guard_, "minimum boundary distance relative to the base stencil (<= 0 disables)");
    params_.add("max_candidates", max_candidates_, "cap on candidate neighborhoods per point");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "refine");
    const json map = load_map(map_path_);
    if (map.contains("config")) params_.apply(map["config"], "refine", false, kNotInherited);
    const MapMethod method = parse_method(map.value("method", "dense"));
    if (unit_ != "q" && unit_ != "rho") throw UsageError("--unit must be q or rho");
    if (offsets_.empty()) throw UsageError("--offsets needs at least one value");

    const data::Sample s = src_.load();
    const int d = s.points.dim();
    if (map["d"].get<int>() != d) throw DataError(map_path_, 0, "map dimension does not match the data");
    const MapOptions opt = est_.map_options(d);
    const double m_max = method == MapMethod::dense ? opt.grid.values.back() : opt.sweep.m_max;

    std::atomic<std::size_t> calls{0};
    const StencilEstimator inner =
        method == MapMethod::dense
            ? dense_estimator(s.points, s.values, opt.grid, opt.sweep.eps, opt.thresholds, opt.sweep.factor)
            : two_point_estimator(s.points, s.values, opt.sweep);
    const StencilEstimator estimator = [&](const Stencil& st) {
      calls.fetch_add(1, std::memory_order_relaxed);
      return inner(st);
    };
    const std::size_t per_call = method == MapMethod::dense ? opt.grid.size() : 2;

    ShiftConfig base_cfg;
    base_cfg.offsets = offsets_;
    base_cfg.unit = unit_ == "rho" ? OffsetUnit::rho : OffsetUnit::q;
    base_cfg.guard_fraction = guard_;
    base_cfg.max_candidates = max_candidates_;
    double c_by_order[3];
    for (int a = 0; a < 3; ++a) c_by_order[a] = c_ >= 0.0 ? c_ : ShiftConfig::safety_for_order(a);
    base_cfg.c = *std::min_element(c_by_order, c_by_order + 3);

    json points = map["points"];
    const std::size_t count = points.size();
    std::vector<json> out(count);
    parallel_for(count, resolve_threads(est_.threads), [&](std::size_t i) {
      json p = points[i];
      const double base_s = json_number(p.at("s_tilde"));
      p["base_s_tilde"] = p["s_tilde"];
      p["refined"] = false;
      json by_order = json::array(), centers = json::array();
      for (int a = 0; a < 3; ++a) {
        by_order.push_back(p["s_tilde"]);
        centers.push_back(p["z"]);
      }
      if (p.value("status", "ok") == "ok" && std::isfinite(base_s)) {
        Point z{};
        const json& zj = p.at("z");
        for (int k = 0; k < d; ++k) z[k] = zj.at(k).get<double>();
        try {
          const Stencil base = knn_stencil(s.points, z, opt.n);
          const RefineResult r =
              refine_estimate(s.points, z, base, estimate_from_json(p), m_max, estimator, base_cfg);
          p["candidates"] = r.candidates.size();
          p["refined"] = r.refined;
          for (int a = 0; a < 3; ++a) {
            ShiftConfig c = base_cfg;
            c.c = c_by_order[a];
            std::size_t chosen = 0;
            const RegularityEstimate e = select_admissible(r, c, &chosen);
            by_order[a] = e.s_tilde;
            centers[a] = point_json(r.candidates[chosen].stencil.z, d);
            if (a == 0) {
              json ej = estimate_json(e);
              for (auto it = ej.begin(); it != ej.end(); ++it) p[it.key()] = it.value();
            }
          }
        } catch (const Error& ex) {
          p["refine_error"] = ex.what();
        }
      }
      p["s_tilde_by_order"] = std::move(by_order);
      p["center_by_order"] = std::move(centers);
      out[i] = std::move(p);
    });

    json r = map;
    r["config"] = params_.effective();
    r["base_config"] = map.value("config", json::object());
    r["points"] = json(out);
    r["refined"] = true;
    r["refine_solves"] = calls.load() * per_call;
    json summary = json::array();
    for (int a = 0; a < 3; ++a) {
      json row;
      row["order"] = a;
      row["c"] = c_by_order[a];
      row["threshold"] = a + 0.5 * d;
      std::vector<double> before, after;
      for (const json& p : r["points"]) {
        before.push_back(json_number(p["base_s_tilde"]));
        after.push_back(json_number(p["s_tilde_by_order"][a]));
      }
      row["flagged_before"] = flag_points(before, a, d).size();
      row["flagged_after"] = flag_points(after, a, d).size();
      summary.push_back(std::move(row));
    }
    r["flag_summary"] = std::move(summary);
    write_output(out_, dump(r));
  }

 private:
  std::string map_path_;
  DataSource src_;
  EstimationArgs est_;
  std::vector<double> offsets_{0.5, 1.0, 1.5};
  std::string unit_ = "q";
  double c_ = -1.0;
  double guard_ = 0.5;
  std::size_t max_candidates_ = 64;
};

// ---------------------------------------------------------------- flag

class FlagCommand : public Command {
 public:
  explicit FlagCommand(CLI::App& app)
      : Command(app, "flag", "count map points whose regularity is too low for a derivative order") {
    app_->add_option("--map", map_path_, "regularity map written by map, sweep or refine")->required();
    params_.add("order", order_, "derivative order 0, 1 or 2 (negative: all)");
    params_.add_flag("indices", indices_, "list the flagged point indices");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "flag");
    if (order_ >= 0) order_of(order_);
    const json map = load_map(map_path_);
    const int d = map["d"].get<int>();
    std::vector<int> orders;
    if (order_ < 0) {
      orders = {0, 1, 2};
    } else {
      orders = {order_of(order_)};
    }
    json rows = json::array();
    for (int a : orders) {
      const auto flagged = flag_points(flag_values(map, a), a, d);
      json row;
      row["order"] = a;
      row["threshold"] = a + 0.5 * d;
      row["flagged"] = flagged.size();
      if (map.value("refined", false)) {
        std::vector<double> before;
        for (const json& p : map["points"]) before.push_back(json_number(p.at("base_s_tilde")));
        row["flagged_before"] = flag_points(before, a, d).size();
      }
      if (indices_) row["indices"] = flagged;
      rows.push_back(std::move(row));
    }
    json r = report("flags");
    r["map"] = map_path_;
    r["d"] = d;
    r["method"] = map.value("method", "dense");
    r["refined"] = map.value("refined", false);
    r["evaluated"] = map["points"].size();
    r["orders"] = std::move(rows);
    write_output(out_, dump(r));
  }

 private:
  std::string map_path_;
  int order_ = -1;
  bool indices_ = false;
};

// ---------------------------------------------------------------- diff

class DiffCommand : public Command {
 public:
  explicit DiffCommand(CLI::App& app) : Command(app, "diff", "RBF-FD derivative field as CSV") {
    src_.add_to(params_);
    params_.add("op", op_, "identity, dx, dy, dz or laplacian");
    params_.add("m", m_, "kernel order (0: derivative order + d/2 + 1.5)");
    params_.add("eps", eps_, "kernel shape parameter");
    params_.add("n", n_, "stencil size");
    params_.add("eval", eval_, "evaluation points: sites, grid:K, at:x;..., or a CSV file");
    params_.add("flags", flags_, "regularity map; its points become the evaluation points, flagged ones are skipped and refined stencil centers are used");
    params_.add("pivot_floor", pivot_floor_, "relative Cholesky pivot floor");
    params_.add("threads", threads_, "worker threads (0: all cores; REGS_THREADS overrides)");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "diff");
    const DiffOperatorSpec op = DiffOperatorSpec::parse(op_);
    const data::Sample s = src_.load();
    const int d = s.points.dim();
    KernelSpec spec{m_ > 0.0 ? m_ : op.order() + 0.5 * d + 1.5, eps_, d};
    std::vector<Point> zs;
    std::vector<bool> flagged;
    std::vector<Point> centers;
    if (!flags_.empty()) {
      if (params_.given("eval")) throw UsageError("--eval and --flags are exclusive");
      const json map = load_map(flags_);
      if (map["d"].get<int>() != d) throw DataError(flags_, 0, "map dimension does not match the data");
      for (const json& p : map["points"]) {
        Point z{};
        for (int k = 0; k < d; ++k) z[k] = p.at("z").at(k).get<double>();
        zs.push_back(z);
      }
      for (const json& p : map["points"]) {
        if (!p.contains("center_by_order")) break;
        Point c{};
        for (int k = 0; k < d; ++k) c[k] = p["center_by_order"].at(op.order()).at(k).get<double>();
        centers.push_back(c);
      }
      if (centers.size() != zs.size()) centers.clear();
      flagged.assign(zs.size(), false);
      for (std::size_t i : flag_points(flag_values(map, op.order()), op.order(), d)) flagged[i] = true;
    } else {
      zs = eval_points(eval_, s.points);
    }
    DiffFieldOptions opt;
    opt.n = n_;
    opt.threads = threads_;
    opt.factor.pivot_floor = pivot_floor_;
    opt.centers = std::move(centers);
    const auto field = differentiate_field(s.points, s.values, zs, op, spec, flagged, opt);
    write_output(out_, derivative_csv(field, d));
  }

 private:
  DataSource src_;
  std::string op_ = "laplacian";
  double m_ = 0.0;
  double eps_ = 1.0;
  std::size_t n_ = 20;
  std::string eval_ = "sites";
  std::string flags_;
  double pivot_floor_ = 1e-12;
  unsigned threads_ = 0;
};

// ---------------------------------------------------------------- bandlimit

json inverse_json(const InverseCheck& c) {
  json j;
  j["s"] = c.s;
  j["m"] = c.m;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["holds"] = c.holds;
  j["beta_min"] = c.beta_min;
  j["beta_max"] = c.beta_max;
  return j;
}

class BandlimitCommand : public Command {
 public:
  explicit BandlimitCommand(CLI::App& app)
      : Command(app, "bandlimit", "band-limited inverse inequality, interpolants and lower bounds") {
    params_.add("mode", mode_, "inverse, interpolate or lower-bound");
    src_.add_to(params_);
    params_.add("instances", instances_, "random instances for the inverse check");
    params_.add("instance_seed", seed_, "seed of the random instances");
    params_.add("nodes", nodes_, "Gauss-Legendre nodes");
    params_.add("sigma", sigma_, "bandwidth (0: kappa / q)");
    params_.add("kappa", kappa_, "bandwidth factor sigma = kappa / q");
    params_.add("t", t_, "Sobolev order of the interpolant");
    params_.add("s", s_, "reference order of the lower bound");
    params_.add("grid", grid_, "orders min:max:step of the lower bound");
    params_.add("eps", eps_, "kernel shape parameter for the companion eta(m)");
    params_.add("eval", eval_, "evaluation points of the interpolant (default grid:401)");
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "bandlimit");
    json r;
    if (mode_ == "inverse") {
      r = inverse();
    } else if (mode_ == "interpolate") {
      r = interpolate();
    } else if (mode_ == "lower-bound") {
      r = lower_bound();
    } else {
      throw UsageError("--mode must be inverse, interpolate or lower-bound");
    }
    write_output(out_, dump(r));
  }

 private:
  json inverse() const {
    if (instances_ == 0) throw UsageError("--instances must be positive");
    const auto suite = inverse_property_suite(instances_, seed_, nodes_);
    json pts = json::array();
    std::size_t held = 0;
    double worst = 0.0, min_ratio = std::numeric_limits<double>::infinity();
    for (const InverseInstance& in : suite) {
      json j = inverse_json(in.check);
      j["sigma"] = in.f.spec.sigma;
      j["t"] = in.f.spec.t;
      j["sites"] = in.f.sites.size();
      j["rel_change_doubled"] = in.rel_change;
      pts.push_back(std::move(j));
      held += in.check.holds ? 1 : 0;
      worst = std::max(worst, in.rel_change);
      min_ratio = std::min(min_ratio, in.check.lhs / in.check.rhs);
    }
    json r = report("inverse");
    r["instances"] = suite.size();
    r["holds"] = held;
    r["max_rel_change_doubled"] = worst;
    r["min_lhs_over_rhs"] = min_ratio;
    r["points"] = std::move(pts);
    return r;
  }

  std::pair<std::vector<double>, std::vector<double>> load_1d() const {
    const data::Sample s = src_.load();
    if (s.points.dim() != 1) throw UsageError("band-limited modes need one-dimensional data");
    std::vector<double> x;
    for (const Point& p : s.points.points()) x.push_back(p[0]);
    return {x, s.values};
  }

  json interpolate() const {
    auto [x, y] = load_1d();
    std::vector<Point> pts;
    for (double v : x) pts.push_back(make_point(v));
    const double q = separation_distance(pts);
    const BandlimitSpec spec{sigma_ > 0.0 ? sigma_ : kappa_ / q, t_, nodes_};
    const BandlimitedInterpolant f = bl_interpolate(spec, x, y);
    const PointSet ps(1, pts);
    const auto zs = eval_points(eval_.empty() ? "grid:401" : eval_, ps);
    json out = json::array();
    for (const Point& z : zs) {
      json j;
      j["z"] = point_json(z, 1);
      j["value"] = f(z[0]);
      out.push_back(std::move(j));
    }
    json r = report("bandlimited_interpolant");
    r["sigma"] = spec.sigma;
    r["q"] = q;
    r["t"] = spec.t;
    r["sobolev_norm"] = f.sobolev_norm(spec.t);
    r["spectral_median"] = spectral_median(f, spec.t);
    r["coefficients"] = f.alpha;
    r["points"] = std::move(out);
    return r;
  }

  json lower_bound() const {
    auto [x, y] = load_1d();
    LowerBoundOptions opt;
    opt.kappa = kappa_;
    opt.quad_nodes = nodes_;
    opt.eps = {EpsRule::constant, eps_};
    const MGrid grid = grid_.empty() ? MGrid::make(1.0, 4.0, 0.1) : MGrid::parse(grid_);
    const auto curve = lower_bound_curve(x, y, s_, grid, opt);
    json pts = json::array();
    for (const LowerBoundPoint& p : curve) {
      json j;
      j["m"] = p.m;
      j["s_star"] = p.s_star;
      j["prefactor"] = p.prefactor;
      j["exponent"] = p.exponent;
      j["bound"] = p.bound;
      j["eta"] = p.eta;
      j["ok"] = p.ok;
      if (!p.error.empty()) j["error"] = p.error;
      pts.push_back(std::move(j));
    }
    json r = report("lower_bound");
    r["s"] = s_;
    r["points"] = std::move(pts);
    return r;
  }

  std::string mode_ = "inverse";
  DataSource src_;
  std::size_t instances_ = 200;
  std::uint64_t seed_ = 1;
  std::size_t nodes_ = 256;
  double sigma_ = 0.0;
  double kappa_ = 3.2;
  double t_ = 2.0;
  double s_ = 1.0;
  std::string grid_;
  double eps_ = 1.0;
  std::string eval_;
};

// ---------------------------------------------------------------- plot

class PlotCommand : public Command {
 public:
  explicit PlotCommand(CLI::App& app) : Command(app, "plot", "render a JSON report as SVG") {
    app_->add_option("--in", in_, "report written by profile, map, sweep, refine or bandlimit")->required();
  }

 protected:
  void run(const json& cfg) override {
    params_.apply(cfg, "plot");
    write_output(out_, render_svg(read_json(in_)));
  }

 private:
  std::string in_;
};

}  // namespace

std::vector<std::unique_ptr<Command>> make_commands(CLI::App& app) {
  std::vector<std::unique_ptr<Command>> cmds;
  cmds.push_back(std::make_unique<GenCommand>(app));
  cmds.push_back(std::make_unique<ProfileCommand>(app));
  cmds.push_back(std::make_unique<MapCommand>(app, "map", "regularity map at many points", "dense"));
  cmds.push_back(std::make_unique<MapCommand>(app, "sweep", "two-point or screened regularity map", "screened"));
  cmds.push_back(std::make_unique<RefineCommand>(app));
  cmds.push_back(std::make_unique<FlagCommand>(app));
  cmds.push_back(std::make_unique<DiffCommand>(app));
  cmds.push_back(std::make_unique<BandlimitCommand>(app));
  cmds.push_back(std::make_unique<PlotCommand>(app));
  return cmds;
}

}  // namespace regs::cli
