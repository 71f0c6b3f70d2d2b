#include "aniso/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aniso/error.hpp"

namespace aniso {
namespace {

const double kSqrt3 = std::sqrt(3.0);

double ring_perimeter(const Ring& ring, const ConvexBody& body) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec e = ring[(i + 1) % ring.size()] - ring[i];
    // |e| h_C(ν) = h_C(|e| ν) with ν = (e_y, -e_x)/|e|.
    sum += body.support({e.y, -e.x, 0.0});
  }
  return sum;
}

// Outward unit normals of the unit triangle's sides.
constexpr int kSides = 3;
Vec side_normal(int i) {
  switch (i) {
    case 0: return {0.0, -1.0, 0.0};
    case 1: return {kSqrt3 / 2.0, 0.5, 0.0};
    default: return {-kSqrt3 / 2.0, 0.5, 0.0};
  }
}

}  // namespace

double polygon_aniso_perimeter(const PolygonRegion& poly, const ConvexBody& body) {
  if (body.dim() != 2) throw Error(ErrorCode::kInvalidArgument, "polygon perimeter needs a planar body");
  // make_polygon validates simplicity and normalizes orientation.
  const CompactSet checked = make_polygon(poly.outer, poly.holes);
  const auto& p = std::get<PolygonRegion>(checked.shape);
  double sum = ring_perimeter(p.outer, body);
  for (const auto& h : p.holes) sum += ring_perimeter(h, body);
  return sum;
}

TriangleAnisotropy triangle_anisotropy(const ConvexBody& body, double side) {
  if (body.dim() != 2) throw Error(ErrorCode::kInvalidArgument, "triangle formulas need a planar body");
  if (!(side > 0.0)) throw Error(ErrorCode::kInvalidArgument, "side must be positive");
  TriangleAnisotropy t;
  t.side = side;
  t.body_volume = body.volume();
  for (int i = 0; i < kSides; ++i) {
    t.u2 += body.support(side_normal(i));
    t.u1 += body.support(-side_normal(i));
  }
  return t;
}

double triangle_boundary_validity(const TriangleAnisotropy& t) { return kSqrt3 * t.side / (2.0 * t.u1); }

double triangle_tube_volume(const TriangleAnisotropy& t, double r, TriangleVariant variant) {
  if (r < 0.0) throw Error(ErrorCode::kRadiusOutsideValidity, "radius must be non-negative");
  const double s = t.side;
  if (variant == TriangleVariant::kFilled) return t.body_volume * r * r + s * t.u2 * r + kSqrt3 / 4.0 * s * s;
  if (r > triangle_boundary_validity(t) * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kRadiusOutsideValidity,
                "boundary formula holds up to r = " + std::to_string(triangle_boundary_validity(t)));
  }
  return (t.body_volume - t.u1 * t.u1 / kSqrt3) * r * r + s * (t.u1 + t.u2) * r;
}

GasketProfile gasket_profile(const ConvexBody& body) {
  const TriangleAnisotropy tri = triangle_anisotropy(body);
  GasketProfile g;
  g.D = std::log2(3.0);
  g.u2 = tri.u2;
  g.body_volume = tri.body_volume;
  g.b = g.u2 * std::pow(kSqrt3 / (4.0 * g.u2), g.D - 1.0);
  g.c = -std::pow(kSqrt3, g.D - 1.0) * std::pow(4.0, -g.D) * std::pow(g.u2, 2.0 - g.D);
  return g;
}

double GasketProfile::c_n(int n) const {
  const double u = u2 * u2;
  return std::pow(kSqrt3 / (4.0 * u2), D) *
         ((2.0 * kSqrt3 * body_volume + u) / (std::pow(3.0, n) * kSqrt3) - u / kSqrt3);
}

double GasketProfile::interval_lo(int n) const { return std::ldexp(kSqrt3 / u2, -n - 2); }

double GasketProfile::interval_hi(int n) const {
  return n == 0 ? std::numeric_limits<double>::infinity() : std::ldexp(kSqrt3 / u2, -n - 1);
}

int GasketProfile::level(double r) const {
  if (r >= interval_lo(0)) return 0;
  int n = static_cast<int>(std::ceil(std::log2(kSqrt3 / (u2 * r)))) - 2;
  // Settle rounding at the breakpoints.
  while (n > 0 && r >= interval_hi(n)) --n;
  while (n < kMaxLevel && r < interval_lo(n)) ++n;
  return std::clamp(n, 0, kMaxLevel);
}

double GasketProfile::t(int n, double alpha) const { return std::ldexp(alpha * kSqrt3 / (4.0 * u2), -n); }

double GasketProfile::f_n(int n, double alpha) const {
  return c_n(n) * std::pow(alpha, D) + b * std::pow(alpha, D - 1.0);
}

double GasketProfile::h_n(int n, double alpha) const {
  return 0.5 * c_n(n) * std::pow(alpha, D) + b * std::pow(alpha, D - 1.0) + b * std::pow(alpha, D - 2.0);
}

GasketValue gasket_eval(const GasketProfile& g, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kNonPositiveRadius, "gasket profile needs r > 0");
  const int n = g.level(r);
  const double p3 = std::pow(3.0, n);
  const double u = g.u2 * g.u2;
  GasketValue out;
  out.V = (g.body_volume - (p3 - 1.0) * u / (2.0 * kSqrt3)) * r * r + std::pow(1.5, n) * g.u2 * r +
          kSqrt3 / 4.0 * std::pow(0.75, n);
  out.S = (2.0 * g.body_volume - (p3 - 1.0) * u / kSqrt3) * r + std::pow(1.5, n) * g.u2;
  return out;
}

GasketLimits gasket_content_limits(const GasketProfile& g) {
  GasketLimits L;
  const double D = g.D;
  L.D = D;
  L.u2 = g.u2;
  L.alpha_max = 4.0 * (1.0 - 1.0 / D);
  const double root = std::sqrt(1.5 * D * D - 3.0 * D + 1.0);
  L.beta_max = 4.0 / D * (D - 1.0 + root);
  L.beta_min = 4.0 / D * (D - 1.0 - root);
  for (const double x : {L.alpha_max, L.beta_max, L.beta_min}) {
    if (x < 1.0 || x > 2.0) throw Error(ErrorCode::kInvalidArgument, "optimizer outside [1, 2]: " + std::to_string(x));
  }
  auto f = [&](double x, double y) { return std::pow(x, D) * y + std::pow(x, D - 1.0) * g.b; };
  auto h = [&](double x, double y) {
    return 0.5 * std::pow(x, D) * y + g.b * std::pow(x, D - 1.0) + g.b * std::pow(x, D - 2.0);
  };
  L.S_upper = f(L.alpha_max, g.c) / (2.0 - D);
  L.S_lower = (g.c + g.b) / (2.0 - D);
  L.M_upper = h(L.beta_max, g.c);
  L.M_lower = h(L.beta_min, g.c);
  const double unit = std::pow(g.u2, 2.0 - D);
  L.S_upper_coef = L.S_upper / unit;
  L.S_lower_coef = L.S_lower / unit;
  L.M_upper_coef = L.M_upper / unit;
  L.M_lower_coef = L.M_lower / unit;
  L.S_lower_short_form_coef = std::pow(kSqrt3, D - 1.0) / (std::pow(4.0, D) * (2.0 - D));
  return L;
}

}  // namespace aniso
