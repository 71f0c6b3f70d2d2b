#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace aniso {

/// Point or direction in R^n, n in {2, 3}. Planar data keeps z = 0.
struct Vec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec& operator+=(const Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
constexpr Vec operator-(const Vec& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec operator*(Vec a, double s) { return a *= s; }
constexpr Vec operator*(double s, Vec a) { return a *= s; }

constexpr double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
/// z-component of the planar cross product.
constexpr double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec& a) { return dot(a, a); }

inline Vec normalized(const Vec& a) {
  const double l = norm(a);
  return l > 0.0 ? a * (1.0 / l) : a;
}

/// Axis-aligned box; empty when lo > hi on any axis.
struct Box {
  Vec lo{1e300, 1e300, 1e300};
  Vec hi{-1e300, -1e300, -1e300};

  void expand(const Vec& p) {
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::fmin(lo[i], p[i]);
      hi[i] = std::fmax(hi[i], p[i]);
    }
  }
  void expand(const Box& b) {
    expand(b.lo);
    expand(b.hi);
  }
  bool empty() const { return lo.x > hi.x; }
  Vec extent() const { return hi - lo; }
};

/// Euclidean distance from p to the box (0 inside). Only the first `dim` axes count.
inline double box_distance(const Box& b, const Vec& p, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::fmax(std::fmax(b.lo[i] - p[i], p[i] - b.hi[i]), 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace aniso
