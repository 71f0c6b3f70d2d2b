#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "aniso/convex_body.hpp"
#include "aniso/error.hpp"

namespace oracle {

struct P {
  double x, y;
};

inline double cross(P o, P a, P b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

/// Andrew's monotone chain, counterclockwise.
inline std::vector<P> hull(std::vector<P> pts) {
  std::sort(pts.begin(), pts.end(), [](P a, P b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<P> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline double shoelace(const std::vector<P>& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const P p = ring[i], q = ring[(i + 1) % ring.size()];
    a += p.x * q.y - p.y * q.x;
  }
  return std::fabs(a) / 2.0;
}

/// λ²(E ⊕ rC) for convex polygons E and C: area of the hull of all pairwise sums.
inline double convex_minkowski_area(const std::vector<P>& E, const std::vector<P>& C, double r) {
  std::vector<P> sums;
  for (P e : E) {
    for (P c : C) sums.push_back({e.x + r * c.x, e.y + r * c.y});
  }
  return shoelace(hull(sums));
}

/// Gauge of a planar polygon by bisection on membership (half-plane tests).
inline double gauge_bisect(const std::vector<P>& C, double x, double y) {
  const std::vector<P> h = hull(C);
  auto inside = [&](double t) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (cross(h[i], h[(i + 1) % h.size()], {x / t, y / t}) < 0) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  while (!inside(hi)) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid > 0.0 && inside(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline std::vector<P> body_points(const aniso::ConvexBody& b) {
  std::vector<P> out;
  for (const auto& v : b.vertices()) out.push_back({v[0], v[1]});
  return out;
}

}  // namespace oracle

/// Checks that `expr` throws aniso::Error carrying `code`.
#define CHECK_THROWS_CODE(expr, expected)                               \
  do {                                                                  \
    bool thrown_ = false;                                               \
    try {                                                               \
      (void)(expr);                                                     \
    } catch (const aniso::Error& e_) {                                  \
      thrown_ = true;                                                   \
      CHECK_MESSAGE(e_.code() == (expected), std::string(e_.what()));   \
    }                                                                   \
    CHECK_MESSAGE(thrown_, "expected an aniso::Error from " #expr);     \
  } while (0)
