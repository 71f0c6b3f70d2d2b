#pragma once

#include "aniso/compact_set.hpp"
#include "aniso/convex_body.hpp"

namespace aniso {

/// Σ over edges of length * h_C(outward unit normal). Hole edges use the
/// region's outward normal (pointing into the hole). Throws kSelfIntersecting.
double polygon_aniso_perimeter(const PolygonRegion& poly, const ConvexBody& body);

/// Support sums for the equilateral triangle with base [(0,0), (s,0)]:
/// u1 = Σ h_C(-v_i), u2 = Σ h_C(v_i), v_i the outward unit side normals.
struct TriangleAnisotropy {
  double u1 = 0.0;
  double u2 = 0.0;
  double body_volume = 0.0;
  double side = 1.0;
};

TriangleAnisotropy triangle_anisotropy(const ConvexBody& body, double side = 1.0);

enum class TriangleVariant { kFilled, kBoundary };

/// Largest r for which the boundary tube formula holds: √3 s / (2 u1).
double triangle_boundary_validity(const TriangleAnisotropy& t);

/// Filled: λ(C) r² + s u2 r + (√3/4) s².
/// Boundary: (λ(C) - u1²/√3) r² + s (u1 + u2) r, only for r up to the
/// validity bound (kRadiusOutsideValidity otherwise).
double triangle_tube_volume(const TriangleAnisotropy& t, double r, TriangleVariant variant);

/// Exact tube data of the Sierpinski gasket with unit side.
struct GasketProfile {
  double D = 0.0;            // log2 3
  double u2 = 0.0;
  double body_volume = 0.0;  // λ²(C)
  double b = 0.0;            // u2 (√3/(4u2))^(D-1)
  double c = 0.0;            // lim c_n = -√3^(D-1) 4^(-D) u2^(2-D)

  /// Coefficient of α^D in S(t_n(α)) / t_n(α)^(1-D).
  double c_n(int n) const;
  /// I_n = [lo, hi); hi is +inf for n = 0.
  double interval_lo(int n) const;
  double interval_hi(int n) const;
  /// Level n with r ∈ I_n, capped at kMaxLevel.
  int level(double r) const;
  /// t_n(α) = α √3 / (4 u2) 2^(-n).
  double t(int n, double alpha) const;
  /// f_n(α) = c_n α^D + b α^(D-1) and h_n(α) = c_n α^D / 2 + b α^(D-1) + b α^(D-2).
  double f_n(int n, double alpha) const;
  double h_n(int n, double alpha) const;

  static constexpr int kMaxLevel = 60;
};

GasketProfile gasket_profile(const ConvexBody& body);

struct GasketValue {
  double V = 0.0;
  double S = 0.0;
};

/// Piecewise V and S (the right derivative) at r. Throws kNonPositiveRadius.
GasketValue gasket_eval(const GasketProfile& g, double r);

/// The four exact D-dimensional content values, plus the optimizing α/β.
/// `*_coef` are the values divided by u2^(2-D).
struct GasketLimits {
  double D = 0.0;
  double u2 = 0.0;
  double S_lower = 0.0, M_lower = 0.0, M_upper = 0.0, S_upper = 0.0;
  double S_lower_coef = 0.0, M_lower_coef = 0.0, M_upper_coef = 0.0, S_upper_coef = 0.0;
  double alpha_max = 0.0;
  double beta_max = 0.0;
  double beta_min = 0.0;
  /// The shortened form √3^(D-1) u2^(2-D) / (4^D (2-D)) that is sometimes
  /// quoted for S_lower; kept for comparison, it is a factor 3 too small.
  double S_lower_short_form_coef = 0.0;
};

/// Throws kInvalidArgument if any optimizer lies outside [1, 2].
GasketLimits gasket_content_limits(const GasketProfile& g);

}  // namespace aniso
