#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aniso/compact_set.hpp"
#include "aniso/convex_body.hpp"
#include "aniso/vec.hpp"

namespace aniso {

/// Regular cell-centred grid. Cell (i, j, k) has centre
/// origin + h * (i + 1/2, j + 1/2, k + 1/2); planar grids have extents[2] = 1.
struct Grid {
  int dim = 2;
  Vec origin;
  double h = 0.0;
  std::array<int, 3> extents{0, 0, 1};
  double padding = 0.0;  // distance from E's bounding box to the grid border on every side

  std::size_t cell_count() const {
    return static_cast<std::size_t>(extents[0]) * extents[1] * extents[2];
  }
  Vec center(int i, int j, int k) const {
    return origin + Vec{(i + 0.5) * h, (j + 0.5) * h, dim == 3 ? (k + 0.5) * h : 0.0};
  }
  double cell_volume() const { return dim == 3 ? h * h * h : h * h; }
};

inline constexpr std::size_t kMaxGridCells = 200'000'000;

/// Grid around E's bounding box with padding b (r_max + 2δ) + 2h, enough to hold
/// E ⊕ r_max C and the two difference steps used for S and its error.
Grid make_grid(const CompactSet& set, const ConvexBody& body, double h, double r_max);

/// Grid around E's bounding box with the given padding on every side.
Grid make_grid_with_padding(const CompactSet& set, double h, double padding);

struct FieldOptions {
  double spacing = 0.0;  // site spacing; 0 selects the cell size h
  int threads = 0;       // 0 selects ANISO_THREADS or the hardware count
};

/// dist_C(x, E) sampled at cell centres. Values are exact (with respect to
/// the site sampling) up to `cap`; farther cells hold +inf.
struct DistanceField {
  Grid grid;
  std::vector<double> values;  // x fastest, then y, then z
  double cap = 0.0;
  double spacing = 0.0;
  std::size_t site_count = 0;
  double set_volume = 0.0;  // λ^n(E) from the set's geometry
  double body_volume = 0.0;
  double inradius = 0.0;
  double outradius = 0.0;
  std::string set_descriptor;
  double scale_cutoff = 0.0;  // 4 ρ^depth for prefractals: finer radii see the approximation, not the attractor

  double at(int i, int j, int k = 0) const {
    return values[(static_cast<std::size_t>(k) * grid.extents[1] + j) * grid.extents[0] + i];
  }
  /// Largest radius whose tube the grid fully contains.
  double max_radius() const { return grid.padding / outradius; }
  /// Smallest admissible radius: the resolution guard 2h / a or the
  /// prefractal cutoff, whichever is larger.
  double min_radius() const { return std::max(2.0 * grid.h / inradius, scale_cutoff); }
};

/// Exact anisotropic distance from every cell centre to the sampled set.
/// Polygon and voxel interiors get 0. Throws kEmptySet or kGridTooSmall.
DistanceField distance_field(const CompactSet& set, const ConvexBody& body, const Grid& grid,
                             const FieldOptions& options = {});

/// How a field is turned into volumes.
enum class VolumeEstimator {
  /// h^n * #{cells : d <= r}.
  kCellCount,
  /// Each cell contributes the fraction of its cube on the {d <= r} side of
  /// the level plane through its centre, the plane normal taken from central
  /// differences of d. Exact for planar level sets.
  kCoverage,
};

/// V_{E,C} at arbitrary radii in one pass over the cells. Radii need not be sorted.
std::vector<double> volumes_at(const DistanceField& field, std::span<const double> radii,
                               VolumeEstimator estimator = VolumeEstimator::kCoverage);

/// Sampled r -> (V, S, κ) table with a per-radius error budget.
struct VolumeProfile {
  int dim = 2;
  std::vector<double> radii;
  std::vector<double> V;
  std::vector<double> S;       // one-sided (4V(r+δ) - 3V(r) - V(r+2δ)) / 2δ
  std::vector<double> kappa;   // S / r^(n-1)
  std::vector<double> delta;   // difference step per radius
  std::vector<double> err_budget;    // absolute error allowance on V
  std::vector<double> S_budget;      // absolute error allowance on S
  double V0 = 0.0;             // volume estimate at r = 0
  double set_volume = 0.0;     // λ^n(E) from geometry
  double body_volume = 0.0;
  double inradius = 0.0;
  double outradius = 0.0;
  double h = 0.0;              // 0 for closed-form tables
  std::size_t site_count = 0;
  std::string set_descriptor;
  std::string method = "grid";

  std::size_t size() const { return radii.size(); }
  /// Error allowance on V at an arbitrary radius (log-linear interpolation, clamped).
  double budget_at(double r) const;
};

/// Difference step for S at radius r.
inline double difference_step(double h, double inradius, double r) {
  const double a = h * inradius;
  const double b = r * 1e-3;
  return a > b ? a : b;
}

/// Profile over increasing radii. Throws kRadiusBelowResolution when a radius
/// is below min_radius() and kRadiusExceedsPadding when r + 2δ leaves the grid.
VolumeProfile volume_profile(const DistanceField& field, std::span<const double> radii,
                             VolumeEstimator estimator = VolumeEstimator::kCoverage);

/// Geometric radii r_max * 2^(-k / per_octave), ascending, down to r_min.
std::vector<double> geometric_radii(double r_min, double r_max, int per_octave);

/// Binary dump: "ANISOFLD" magic, u32 version, u32 dim, origin (3 f64), h (f64),
/// extents (3 i32), cap (f64), then values as f64, x fastest.
void write_field_binary(const std::string& path, const DistanceField& field);
DistanceField read_field_binary(const std::string& path);

}  // namespace aniso
