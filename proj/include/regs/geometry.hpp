#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regs/point.hpp"

namespace regs {

class BucketGrid;

// Immutable scattered point cloud in R^d, d in {1, 2, 3}. Keeps both an
// array-of-points view and per-coordinate columns for the distance kernels.
class PointSet {
 public:
  PointSet();
  PointSet(int d, std::vector<Point> pts);
  PointSet(const PointSet& other);
  PointSet& operator=(const PointSet& other);
  PointSet(PointSet&&) noexcept;
  PointSet& operator=(PointSet&&) noexcept;
  ~PointSet();

  int dim() const { return d_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  std::span<const Point> points() const { return pts_; }
  const double* column(int k) const { return cols_[k].data(); }

  // Built on first use; safe to call from several threads.
  const BucketGrid& grid() const;

 private:
  int d_ = 1;
  std::vector<Point> pts_;
  std::vector<double> cols_[3];
  mutable std::unique_ptr<BucketGrid> grid_;
  mutable std::unique_ptr<std::once_flag> grid_once_ = std::make_unique<std::once_flag>();
};

struct Stencil {
  Point z{};
  // Sorted by distance to z, ties by index.
  std::vector<std::size_t> indices;
  double q = 0.0;
  double rho = 0.0;

  std::size_t size() const { return indices.size(); }
};

enum class KnnMethod { automatic, brute_force, bucket_grid };

// Sets up to this size are searched exhaustively under KnnMethod::automatic.
inline constexpr std::size_t kBruteForceLimit = 2000;

Stencil knn_stencil(const PointSet& ps, const Point& z, std::size_t n,
                    KnnMethod method = KnnMethod::automatic);

std::vector<Point> gather(const PointSet& ps, std::span<const std::size_t> idx);
std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> idx);

// Half the minimum pairwise distance. Throws DuplicateSiteError on coincident
// sites and InsufficientPointsError for fewer than two.
double separation_distance(std::span<const Point> pts);

// max over probes of the distance to the nearest site.
double fill_distance(std::span<const Point> sites, std::span<const Point> probes);

struct HullInfo {
  int d = 1;
  // Counterclockwise for d = 2; {argmin, argmax} for d = 1. Indices refer to
  // the span passed to convex_hull.
  std::vector<std::size_t> vertices;
  std::vector<Point> vertex_points;
  // One outward unit normal per edge (vertex k to k+1); {-1, +1} for d = 1.
  std::vector<Point> edge_normals;
  // Euclidean distance from z to the boundary; negative when z lies outside.
  double dist_to_boundary = 0.0;
};

HullInfo convex_hull(std::span<const Point> sites, int d, const Point& z);

// Signed distance from z to the boundary of a hull (positive inside).
double hull_signed_distance(const HullInfo& hull, const Point& z);

// Unit rays from z to each hull vertex plus the outward edge normals, merged
// at 1e-6 rad and ordered by polar angle. Throws DegenerateGeometryError if z
// is not strictly inside.
std::vector<Point> shift_directions(const HullInfo& hull, const Point& z);

struct Box {
  Point lo{0.0, 0.0, 0.0};
  Point hi{1.0, 1.0, 1.0};
};

double radical_inverse(std::size_t index, unsigned base);

// Halton points with bases 2, 3, 5; the k-th point uses index skip + k + 1.
PointSet halton(std::size_t n, int d, std::size_t skip = 0, const Box& box = {});

struct Dataset {
  PointSet points;
  std::vector<double> values;  // empty when the file has no value column
};

// Comma-separated rows x1..xd[,value]; a non-numeric first row is a header.
// With d = 0 the last column is taken as the value whenever there are at
// least two columns. Throws DataError naming the file and row.
Dataset read_csv(const std::string& path, int d = 0);
void write_csv(const std::string& path, const PointSet& ps, std::span<const double> values = {});

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace regs
