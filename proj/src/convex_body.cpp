#include "aniso/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aniso/error.hpp"

namespace aniso {
namespace {

constexpr double kTol = 1e-12;

double scale_of(std::span<const Vec> pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, norm(p));
  return s;
}

// Andrew's monotone chain; returns the extreme points counterclockwise.
std::vector<Vec> hull_2d(std::span<const Vec> input, double scale) {
  std::vector<Vec> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  const double tol = kTol * scale * scale;
  auto turn = [](const Vec& o, const Vec& a, const Vec& b) { return cross2(a - o, b - o); };
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= tol) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Orthonormal basis (e1, e2) of the plane with normal n.
void plane_basis(const Vec& n, Vec& e1, Vec& e2) {
  const Vec helper = std::fabs(n.x) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
  e1 = normalized(cross(n, helper));
  e2 = cross(n, e1);
}

}  // namespace

double pseudo_angle(double x, double y) {
  const double s = std::fabs(x) + std::fabs(y);
  if (s == 0.0) return 0.0;
  if (y >= 0.0) return x >= 0.0 ? y / s : 1.0 - x / s;
  return x < 0.0 ? 2.0 - y / s : 3.0 + x / s;
}

ConvexBody ConvexBody::make(int dim, std::span<const Vec> points) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (points.size() < static_cast<std::size_t>(dim + 1)) {
    throw Error(ErrorCode::kDegenerateBody, "need at least n+1 vertices");
  }
  const double scale = scale_of(points);
  if (scale == 0.0) throw Error(ErrorCode::kDegenerateBody, "all vertices at the origin");

  ConvexBody body;
  body.dim_ = dim;

  if (dim == 2) {
    std::vector<Vec> hull = hull_2d(points, scale);
    if (hull.size() < 3) throw Error(ErrorCode::kDegenerateBody, "hull is lower-dimensional");
    double area2 = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) area2 += cross2(hull[i], hull[(i + 1) % hull.size()]);
    if (area2 <= kTol * scale * scale) throw Error(ErrorCode::kDegenerateBody, "hull has zero area");
    // Start at the vertex of smallest pseudo-angle so the angles ascend.
    auto first = std::min_element(hull.begin(), hull.end(), [](const Vec& a, const Vec& b) {
      return pseudo_angle(a.x, a.y) < pseudo_angle(b.x, b.y);
    });
    std::rotate(hull.begin(), first, hull.end());
    body.vertices_ = std::move(hull);
    const int k = static_cast<int>(body.vertices_.size());
    for (int i = 0; i < k; ++i) {
      const Vec& a = body.vertices_[i];
      const Vec& b = body.vertices_[(i + 1) % k];
      const Vec d = b - a;
      Facet f;
      f.normal = normalized(Vec{d.y, -d.x, 0.0});
      f.offset = dot(f.normal, a);
      f.vertices = {i, (i + 1) % k};
      body.facets_.push_back(std::move(f));
    }
    body.volume_ = 0.5 * area2;
  } else {
    if (points.size() > 256) throw Error(ErrorCode::kInvalidArgument, "3D bodies are limited to 256 input vertices");
    std::vector<Vec> pts(points.begin(), points.end());
    const double tol = kTol * scale * 64.0;
    struct Plane {
      Vec n;
      double o;
    };
    std::vector<Plane> planes;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t l = j + 1; l < m; ++l) {
          Vec n = cross(pts[j] - pts[i], pts[l] - pts[i]);
          if (norm(n) <= kTol * scale * scale) continue;
          n = normalized(n);
          double o = dot(n, pts[i]);
          bool below = true, above = true;
          for (const auto& p : pts) {
            const double s = dot(n, p) - o;
            below = below && s <= tol;
            above = above && s >= -tol;
          }
          if (!below && !above) continue;
          if (!below) {
            n = -n;
            o = -o;
          }
          const bool dup = std::any_of(planes.begin(), planes.end(), [&](const Plane& q) {
            return norm(q.n - n) < 1e-9 && std::fabs(q.o - o) <= tol;
          });
          if (!dup) planes.push_back({n, o});
        }
      }
    }
    if (planes.size() < 4) throw Error(ErrorCode::kDegenerateBody, "hull is lower-dimensional");

    // Facet polygons: in-plane hull of the points lying on each plane.
    std::vector<Vec> extreme;
    auto index_of = [&](const Vec& p) {
      for (std::size_t i = 0; i < extreme.size(); ++i) {
        if (norm(extreme[i] - p) <= tol) return static_cast<int>(i);
      }
      extreme.push_back(p);
      return static_cast<int>(extreme.size() - 1);
    };
    double volume = 0.0;
    for (const auto& pl : planes) {
      Vec e1, e2;
      plane_basis(pl.n, e1, e2);
      std::vector<Vec> local;
      std::vector<Vec> on_plane;
      for (const auto& p : pts) {
        if (std::fabs(dot(pl.n, p) - pl.o) <= tol) {
          on_plane.push_back(p);
          local.push_back({dot(p, e1), dot(p, e2), 0.0});
        }
      }
      const std::vector<Vec> poly = hull_2d(local, scale);
      if (poly.size() < 3) throw Error(ErrorCode::kDegenerateBody, "degenerate facet");
      Facet f;
      f.normal = pl.n;
      f.offset = pl.o;
      double area2 = 0.0;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        area2 += cross2(poly[i], poly[(i + 1) % poly.size()]);
        const Vec world = poly[i].x * e1 + poly[i].y * e2 + pl.o * pl.n;
        f.vertices.push_back(index_of(world));
      }
      volume += pl.o * 0.5 * area2 / 3.0;
      body.facets_.push_back(std::move(f));
    }
    body.vertices_ = std::move(extreme);
    body.volume_ = volume;
  }
  body.finish();
  return body;
}

void ConvexBody::finish() {
  const double scale = scale_of(vertices_);
  inradius_ = 1e300;
  for (const auto& f : facets_) inradius_ = std::min(inradius_, f.offset);
  if (inradius_ <= kTol * scale) {
    throw Error(ErrorCode::kOriginNotInterior, "the origin is not an interior point of the hull");
  }
  if (volume_ <= 0.0) throw Error(ErrorCode::kDegenerateBody, "non-positive volume");
  outradius_ = scale;
  pseudo_angles_.clear();
  if (dim_ == 2) {
    for (const auto& v : vertices_) pseudo_angles_.push_back(pseudo_angle(v.x, v.y));
  }
}

double ConvexBody::support(const Vec& y) const {
  double best = -1e300;
  for (const auto& v : vertices_) best = std::max(best, dot(v, y));
  return best;
}

int ConvexBody::hit_facet(const Vec& x) const {
  if (dim_ == 2) {
    const double p = pseudo_angle(x.x, x.y);
    const auto it = std::upper_bound(pseudo_angles_.begin(), pseudo_angles_.end(), p);
    const auto i = it - pseudo_angles_.begin() - 1;
    return i < 0 ? static_cast<int>(facets_.size()) - 1 : static_cast<int>(i);
  }
  // 3D: the ray meets facet f's plane at x / t with t = n.x / offset; accept
  // the facet whose polygon contains that point.
  const double tol = 1e-12 * outradius_ * outradius_;
  int fallback = 0;
  double fallback_t = -1e300;
  for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
    const Facet& f = facets_[fi];
    const double t = dot(f.normal, x) / f.offset;
    if (t > fallback_t) {
      fallback_t = t;
      fallback = static_cast<int>(fi);
    }
    if (t <= 0.0) continue;
    const Vec q = x * (1.0 / t);
    bool inside = true;
    const std::size_t m = f.vertices.size();
    for (std::size_t i = 0; i < m && inside; ++i) {
      const Vec& a = vertices_[f.vertices[i]];
      const Vec& b = vertices_[f.vertices[(i + 1) % m]];
      inside = dot(cross(b - a, q - a), f.normal) >= -tol;
    }
    if (inside) return static_cast<int>(fi);
  }
  return fallback;
}

double ConvexBody::gauge(const Vec& x) const {
  if (x.x == 0.0 && x.y == 0.0 && x.z == 0.0) return 0.0;
  const Facet& f = facets_[hit_facet(x)];
  return std::max(0.0, dot(f.normal, x) / f.offset);
}

double ConvexBody::gauge_dual(const Vec& x) const {
  double best = 0.0;
  for (const auto& f : facets_) best = std::max(best, dot(f.normal, x) / f.offset);
  return best;
}

ConvexBody ConvexBody::scaled(double r) const {
  if (!(r > 0.0)) throw Error(ErrorCode::kNonPositiveScale, "scale factor must be positive");
  ConvexBody out = *this;
  for (auto& v : out.vertices_) v *= r;
  for (auto& f : out.facets_) f.offset *= r;
  out.volume_ = volume_ * std::pow(r, dim_);
  out.inradius_ = inradius_ * r;
  out.outradius_ = outradius_ * r;
  return out;
}

ConvexBody make_body(int dim, std::span<const Vec> vertices) { return ConvexBody::make(dim, vertices); }

ConvexBody scale(const ConvexBody& body, double r) { return body.scaled(r); }

ConvexBody regular_polygon(int k, double radius) {
  if (k < 3) throw Error(ErrorCode::kDegenerateBody, "a polygon needs at least 3 vertices");
  std::vector<Vec> v;
  v.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * std::numbers::pi * i / k;
    v.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
  }
  return ConvexBody::make(2, v);
}

}  // namespace aniso
