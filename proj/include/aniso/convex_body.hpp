#pragma once

#include <span>
#include <vector>

#include "aniso/vec.hpp"

namespace aniso {

/// Supporting hyperplane {x : normal . x = offset} of a polytope facet.
/// `normal` is the outward unit normal; `offset` = h_C(normal) > 0.
/// `vertices` indexes the owning body's vertex list, counterclockwise about
/// the normal (3D) or as the edge's two endpoints (2D).
struct Facet {
  Vec normal;
  double offset = 0.0;
  std::vector<int> vertices;
};

/// Convex polytope C in R^n (n = 2 or 3) with the origin in its interior.
///
/// Construction reduces the input to the extreme points of its hull and
/// caches the volume, the inradius a (largest ball about 0 inside C) and the
/// outradius b (smallest ball about 0 containing C), so that
/// B(0, a) ⊆ C ⊆ B(0, b) and |x|/b <= gauge(x) <= |x|/a.
class ConvexBody {
 public:
  /// Throws Error{kDegenerateBody} for fewer than n+1 affinely independent
  /// points and Error{kOriginNotInterior} when 0 is not an interior point.
  static ConvexBody make(int dim, std::span<const Vec> points);

  int dim() const { return dim_; }
  std::span<const Vec> vertices() const { return vertices_; }
  std::span<const Facet> facets() const { return facets_; }
  double volume() const { return volume_; }
  double inradius() const { return inradius_; }
  double outradius() const { return outradius_; }

  /// h_C(y) = max over vertices of x . y.
  double support(const Vec& y) const;

  /// Minkowski functional min{t >= 0 : x ∈ tC}, found by casting the ray
  /// from 0 through x against the boundary. In 2D the hit edge is located by
  /// binary search over vertex pseudo-angles.
  double gauge(const Vec& x) const;

  /// Same quantity via the facet description: max_f (normal_f . x) / offset_f.
  double gauge_dual(const Vec& x) const;

  /// Index of the facet hit by the ray through x (x != 0).
  int hit_facet(const Vec& x) const;

  bool contains(const Vec& x, double tol = 1e-12) const { return gauge_dual(x) <= 1.0 + tol; }

  /// Vertex-wise dilation r C; volume scales by r^n.
  ConvexBody scaled(double r) const;

 private:
  ConvexBody() = default;
  void finish();

  int dim_ = 2;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  std::vector<double> pseudo_angles_;  // 2D only, ascending; vertex i starts edge i
  double volume_ = 0.0;
  double inradius_ = 0.0;
  double outradius_ = 0.0;
};

ConvexBody make_body(int dim, std::span<const Vec> vertices);
ConvexBody scale(const ConvexBody& body, double r);

/// Regular k-gon inscribed in the circle of the given radius, first vertex on
/// the positive x-axis. The default k = 64 is the "disk64" body.
ConvexBody regular_polygon(int k = 64, double radius = 1.0);

/// Monotone angle surrogate on [0, 4): orders planar directions like atan2
/// without trigonometry.
double pseudo_angle(double x, double y);

}  // namespace aniso
