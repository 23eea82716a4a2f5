#include "regs/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "regs/errors.hpp"
#include "regs/simd.hpp"

namespace regs {

// Uniform cell index over the bounding box, roughly four points per cell.
class BucketGrid {
 public:
  explicit BucketGrid(const PointSet& ps) : d_(ps.dim()) {
    const std::size_t n = ps.size();
    for (int k = 0; k < d_; ++k) {
      lo_[k] = HUGE_VAL;
      double hi = -HUGE_VAL;
      for (std::size_t i = 0; i < n; ++i) {
        lo_[k] = std::min(lo_[k], ps[i][k]);
        hi = std::max(hi, ps[i][k]);
      }
      span_[k] = std::max(hi - lo_[k], 0.0);
    }
    double vol = 1.0;
    int active = 0;
    for (int k = 0; k < d_; ++k) {
      if (span_[k] > 0.0) {
        vol *= span_[k];
        ++active;
      }
    }
    const double per_cell = 4.0;
    h_ = active == 0 ? 1.0 : std::pow(vol * per_cell / static_cast<double>(n), 1.0 / active);
    for (int k = 0; k < 3; ++k) {
      dims_[k] = 1;
      if (k < d_ && span_[k] > 0.0) {
        dims_[k] = static_cast<long>(std::min(std::floor(span_[k] / h_) + 1.0, 1e6));
      }
    }
    const std::size_t cells = static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
    start_.assign(cells + 1, 0);
    std::vector<std::size_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of[i] = flat(cell_coords(ps[i]));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[fill[cell_of[i]]++] = i;
  }

  std::array<long, 3> cell_coords(const Point& p) const {
    std::array<long, 3> c{0, 0, 0};
    for (int k = 0; k < d_; ++k) {
      if (dims_[k] <= 1) continue;
      long v = static_cast<long>(std::floor((p[k] - lo_[k]) / h_));
      c[k] = std::clamp(v, 0L, dims_[k] - 1);
    }
    return c;
  }

  std::size_t flat(const std::array<long, 3>& c) const {
    return static_cast<std::size_t>((c[2] * dims_[1] + c[1]) * dims_[0] + c[0]);
  }

  // Appends the points of every cell at Chebyshev ring distance exactly r.
  // Returns false once the ring lies entirely outside the grid.
  bool append_ring(const std::array<long, 3>& c, long r, std::vector<std::size_t>& out) const {
    bool any = false;
    long lo[3], hi[3];
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::max(c[k] - r, 0L);
      hi[k] = std::min(c[k] + r, dims_[k] - 1);
    }
    for (long z = lo[2]; z <= hi[2]; ++z) {
      for (long y = lo[1]; y <= hi[1]; ++y) {
        for (long x = lo[0]; x <= hi[0]; ++x) {
          const long cheb = std::max({std::labs(x - c[0]), std::labs(y - c[1]), std::labs(z - c[2])});
          if (cheb != r) continue;
          any = true;
          const std::size_t f = flat({x, y, z});
          out.insert(out.end(), items_.begin() + static_cast<long>(start_[f]),
                     items_.begin() + static_cast<long>(start_[f + 1]));
        }
      }
    }
    return any;
  }

  double cell_size() const { return h_; }

 private:
  int d_;
  double lo_[3] = {0, 0, 0};
  double span_[3] = {0, 0, 0};
  double h_ = 1.0;
  long dims_[3] = {1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

PointSet::PointSet(int d, std::vector<Point> pts) : d_(d), pts_(std::move(pts)) {
  if (d < 1 || d > 3) throw InvalidSpecError("point dimension must be 1, 2 or 3");
  for (int k = 0; k < 3; ++k) cols_[k].resize(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (k >= d) pts_[i][k] = 0.0;
      if (!std::isfinite(pts_[i][k])) throw DomainError("non-finite coordinate at site " + std::to_string(i));
      cols_[k][i] = pts_[i][k];
    }
  }
}

PointSet::PointSet(const PointSet& other) : d_(other.d_), pts_(other.pts_) {
  for (int k = 0; k < 3; ++k) cols_[k] = other.cols_[k];
}

PointSet& PointSet::operator=(const PointSet& other) {
  if (this != &other) {
    d_ = other.d_;
    pts_ = other.pts_;
    for (int k = 0; k < 3; ++k) cols_[k] = other.cols_[k];
    grid_.reset();
    grid_once_ = std::make_unique<std::once_flag>();
  }
  return *this;
}

PointSet::PointSet(PointSet&&) noexcept = default;
PointSet& PointSet::operator=(PointSet&&) noexcept = default;
PointSet::~PointSet() = default;
PointSet::PointSet() = default;

const BucketGrid& PointSet::grid() const {
  std::call_once(*grid_once_, [this] { grid_ = std::make_unique<BucketGrid>(*this); });
  return *grid_;
}

namespace {

// The SIMD distances may differ from the canonical ones in the last bit
// (fused multiply-add), so they only prune; ranking uses distance_sq.
constexpr double kPruneSlack = 1e-12;

struct Ranked {
  double d2;
  std::size_t idx;
  bool operator<(const Ranked& o) const { return d2 < o.d2 || (d2 == o.d2 && idx < o.idx); }
};

std::vector<std::size_t> rank_candidates(const PointSet& ps, const Point& z,
                                         std::span<const std::size_t> cand,
                                         std::span<const double> approx, std::size_t n) {
  std::vector<double> tmp(approx.begin(), approx.end());
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<long>(n - 1), tmp.end());
  const double cut = tmp[n - 1] * (1.0 + kPruneSlack) + std::numeric_limits<double>::min();
  std::vector<Ranked> keep;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (approx[i] <= cut) keep.push_back({distance_sq(ps[cand[i]], z), cand[i]});
  }
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = keep[i].idx;
  return out;
}

std::vector<std::size_t> knn_brute(const PointSet& ps, const Point& z, std::size_t n) {
  const std::size_t N = ps.size();
  const double* cols[3] = {ps.column(0), ps.column(1), ps.column(2)};
  std::vector<double> d2(N);
  simd::active().sq_dist(cols, static_cast<std::size_t>(ps.dim()), N, z.data(), d2.data());
  std::vector<std::size_t> all(N);
  for (std::size_t i = 0; i < N; ++i) all[i] = i;
  return rank_candidates(ps, z, all, d2, n);
}

std::vector<std::size_t> knn_grid(const PointSet& ps, const Point& z, std::size_t n) {
  const BucketGrid& g = ps.grid();
  const auto c = g.cell_coords(z);
  const double* cols[3] = {ps.column(0), ps.column(1), ps.column(2)};
  std::vector<std::size_t> cand;
  std::vector<double> d2;
  for (long r = 0;; ++r) {
    const bool any = g.append_ring(c, r, cand);
    if (cand.size() >= n) {
      d2.resize(cand.size());
      simd::active().sq_dist_indexed(cols, static_cast<std::size_t>(ps.dim()), cand.data(),
                                     cand.size(), z.data(), d2.data());
      std::vector<double> tmp(d2);
      std::nth_element(tmp.begin(), tmp.begin() + static_cast<long>(n - 1), tmp.end());
      const double kth = std::sqrt(tmp[n - 1]) * (1.0 + kPruneSlack);
      // Anything in ring r + 1 or beyond is at least r cell widths away.
      if (static_cast<double>(r) * g.cell_size() > kth || !any) break;
    } else if (!any) {
      break;
    }
  }
  return rank_candidates(ps, z, cand, d2, n);
}

}  // namespace

Stencil knn_stencil(const PointSet& ps, const Point& z, std::size_t n, KnnMethod method) {
  if (n < 1 || ps.size() < n) {
    throw InsufficientPointsError("stencil of " + std::to_string(n) + " requested from " +
                                  std::to_string(ps.size()) + " sites");
  }
  Point zz = z;
  for (int k = ps.dim(); k < 3; ++k) zz[k] = 0.0;
  if (method == KnnMethod::automatic) {
    method = ps.size() <= kBruteForceLimit ? KnnMethod::brute_force : KnnMethod::bucket_grid;
  }
  Stencil s;
  s.z = zz;
  s.indices = method == KnnMethod::brute_force ? knn_brute(ps, zz, n) : knn_grid(ps, zz, n);
  s.rho = distance(ps[s.indices.back()], zz);
  if (n >= 2) {
    const auto pts = gather(ps, s.indices);
    s.q = separation_distance(pts);
  }
  return s;
}

std::vector<Point> gather(const PointSet& ps, std::span<const std::size_t> idx) {
  std::vector<Point> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = ps[idx[i]];
  return out;
}

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = values[idx[i]];
  return out;
}

double separation_distance(std::span<const Point> pts) {
  if (pts.size() < 2) throw InsufficientPointsError("separation distance needs two sites");
  double best = HUGE_VAL;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double d2 = distance_sq(pts[i], pts[j]);
      if (d2 < best) {
        best = d2;
        bi = j;
        bj = i;
      }
    }
  }
  if (best == 0.0) throw DuplicateSiteError(bi, bj);
  return 0.5 * std::sqrt(best);
}

double fill_distance(std::span<const Point> sites, std::span<const Point> probes) {
  if (sites.empty() || probes.empty()) throw InsufficientPointsError("fill distance needs sites and probes");
  double worst = 0.0;
  for (const Point& p : probes) {
    double best = HUGE_VAL;
    for (const Point& s : sites) best = std::min(best, distance_sq(p, s));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double ex = b[0] - a[0], ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0.0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p[0] - (a[0] + t * ex), dy = p[1] - (a[1] + t * ey);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double hull_signed_distance(const HullInfo& hull, const Point& z) {
  if (hull.d == 1) {
    const double a = hull.vertex_points[0][0], b = hull.vertex_points[1][0];
    return std::min(z[0] - a, b - z[0]);
  }
  const auto& v = hull.vertex_points;
  const std::size_t h = v.size();
  double dist = HUGE_VAL;
  bool inside = true;
  for (std::size_t k = 0; k < h; ++k) {
    const Point& a = v[k];
    const Point& b = v[(k + 1) % h];
    dist = std::min(dist, segment_distance(z, a, b));
    if (cross(a, b, z) < 0.0) inside = false;
  }
  return inside ? dist : -dist;
}

HullInfo convex_hull(std::span<const Point> sites, int d, const Point& z) {
  HullInfo info;
  info.d = d;
  if (d == 1) {
    if (sites.size() < 2) throw DegenerateGeometryError("1D hull needs two sites");
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < sites.size(); ++i) {
      if (sites[i][0] < sites[lo][0]) lo = i;
      if (sites[i][0] > sites[hi][0]) hi = i;
    }
    if (sites[lo][0] == sites[hi][0]) throw DegenerateGeometryError("all 1D sites coincide");
    info.vertices = {lo, hi};
    info.vertex_points = {sites[lo], sites[hi]};
    info.edge_normals = {make_point(-1.0), make_point(1.0)};
    info.dist_to_boundary = hull_signed_distance(info, z);
    return info;
  }
  if (d != 2) throw InvalidSpecError("convex hulls are limited to d = 1 and d = 2");
  if (sites.size() < 3) throw DegenerateGeometryError("2D hull needs three sites");

  std::vector<std::size_t> order(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sites[a][0] != sites[b][0]) return sites[a][0] < sites[b][0];
    if (sites[a][1] != sites[b][1]) return sites[a][1] < sites[b][1];
    return a < b;
  });

  // Andrew's monotone chain; collinear points are dropped.
  std::vector<std::size_t> h(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross(sites[h[k - 2]], sites[h[k - 1]], sites[i]) <= 0.0) --k;
    h[k++] = i;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t i = order[t];
    while (k >= lower && cross(sites[h[k - 2]], sites[h[k - 1]], sites[i]) <= 0.0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  if (h.size() < 3) throw DegenerateGeometryError("all 2D sites are collinear");

  info.vertices = h;
  for (std::size_t i : h) info.vertex_points.push_back(sites[i]);
  for (std::size_t e = 0; e < h.size(); ++e) {
    const Point& a = info.vertex_points[e];
    const Point& b = info.vertex_points[(e + 1) % h.size()];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    info.edge_normals.push_back(make_point(dy / len, -dx / len));
  }
  info.dist_to_boundary = hull_signed_distance(info, z);
  return info;
}

std::vector<Point> shift_directions(const HullInfo& hull, const Point& z) {
  if (!(hull_signed_distance(hull, z) > 0.0)) {
    throw DegenerateGeometryError("evaluation point is not strictly inside the hull");
  }
  if (hull.d == 1) return {make_point(-1.0), make_point(1.0)};

  std::vector<double> angles;
  for (const Point& v : hull.vertex_points) angles.push_back(std::atan2(v[1] - z[1], v[0] - z[0]));
  for (const Point& n : hull.edge_normals) angles.push_back(std::atan2(n[1], n[0]));
  for (double& a : angles) {
    if (a < 0.0) a += 2.0 * std::numbers::pi;
  }
  std::sort(angles.begin(), angles.end());

  constexpr double kTol = 1e-6;
  std::vector<double> kept;
  for (double a : angles) {
    if (!kept.empty() && a - kept.back() <= kTol) continue;
    kept.push_back(a);
  }
  if (kept.size() > 1 && kept.front() + 2.0 * std::numbers::pi - kept.back() <= kTol) kept.pop_back();

  std::vector<Point> dirs;
  for (double a : kept) dirs.push_back(make_point(std::cos(a), std::sin(a)));
  return dirs;
}

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

PointSet halton(std::size_t n, int d, std::size_t skip, const Box& box) {
  if (d < 1 || d > 3) throw InvalidSpecError("Halton dimension must be 1, 2 or 3");
  static constexpr unsigned kBases[3] = {2, 3, 5};
  std::vector<Point> pts(n, Point{0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      const double u = radical_inverse(skip + i + 1, kBases[k]);
      pts[i][k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
    }
  }
  return PointSet(d, std::move(pts));
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      f.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return f;
}

}  // namespace

Dataset read_csv(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  std::string line;
  std::size_t row = 0;
  std::size_t ncols = 0;
  bool has_value = false;
  std::vector<Point> pts;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split(line);
    std::vector<double> nums(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], nums[i]);
    if (ncols == 0) {
      ncols = fields.size();
      if (d == 0) {
        has_value = ncols >= 2;
        d = static_cast<int>(has_value ? ncols - 1 : ncols);
      } else {
        has_value = ncols == static_cast<std::size_t>(d) + 1;
        if (!has_value && ncols != static_cast<std::size_t>(d)) {
          throw DataError(path, row, "expected " + std::to_string(d) + " or " + std::to_string(d + 1) +
                                         " columns, found " + std::to_string(ncols));
        }
      }
      if (d < 1 || d > 3) throw DataError(path, row, "unsupported dimension " + std::to_string(d));
      if (!numeric && pts.empty()) continue;  // header
    }
    if (fields.size() != ncols) {
      throw DataError(path, row, "expected " + std::to_string(ncols) + " columns, found " +
                                     std::to_string(fields.size()));
    }
    if (!numeric) throw DataError(path, row, "non-numeric field");
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) p[k] = nums[k];
    for (double v : nums) {
      if (!std::isfinite(v)) throw DataError(path, row, "non-finite field");
    }
    pts.push_back(p);
    if (has_value) vals.push_back(nums[d]);
  }
  if (pts.empty()) throw DataError(path, row, "no data rows");
  Dataset ds;
  ds.points = PointSet(d, std::move(pts));
  ds.values = std::move(vals);
  return ds;
}

void write_csv(const std::string& path, const PointSet& ps, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path, 0, "cannot open file for writing");
  std::string buf;
  for (int k = 0; k < ps.dim(); ++k) buf += (k ? ",x" : "x") + std::to_string(k + 1);
  if (!values.empty()) buf += ",value";
  buf += '\n';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int k = 0; k < ps.dim(); ++k) {
      if (k) buf += ',';
      buf += format_double(ps[i][k]);
    }
    if (!values.empty()) {
      buf += ',';
      buf += format_double(values[i]);
    }
    buf += '\n';
  }
  out << buf;
}

}  // namespace regs
