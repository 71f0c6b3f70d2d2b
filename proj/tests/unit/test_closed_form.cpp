#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aniso/closed_form.hpp"
#include "aniso/monte_carlo.hpp"
#include "aniso/rng.hpp"
#include "aniso/spec_io.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

const std::vector<oracle::P> kTriangle{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};

ConvexBody random_quad(Rng& rng) {
  std::vector<Vec> v;
  for (int q = 0; q < 4; ++q) {
    const double ang = (q + rng.uniform(0.1, 0.9)) * std::numbers::pi / 2.0;
    const double rad = rng.uniform(0.5, 1.5);
    v.push_back({rad * std::cos(ang), rad * std::sin(ang), 0.0});
  }
  return make_body(2, v);
}

}  // namespace

TEST_CASE("anisotropic perimeter is the linear Steiner coefficient") {
  Rng rng(41);
  for (int k = 0; k < 10; ++k) {
    const ConvexBody C = random_quad(rng);
    const auto cp = oracle::body_points(C);
    const CompactSet tri = unit_triangle();
    const double A1 = oracle::convex_minkowski_area(kTriangle, cp, 1.0);
    const double expected = A1 - std::sqrt(3.0) / 4 - C.volume();
    CHECK(polygon_aniso_perimeter(std::get<PolygonRegion>(tri.shape), C) == doctest::Approx(expected).epsilon(1e-10));
  }
  const CompactSet sq = make_polygon({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  CHECK(polygon_aniso_perimeter(std::get<PolygonRegion>(sq.shape), parse_body("square")) == doctest::Approx(4.0));
}

TEST_CASE("filled triangle tube volume equals the exact Minkowski area") {
  Rng rng(43);
  for (int k = 0; k < 10; ++k) {
    const ConvexBody C = random_quad(rng);
    const TriangleAnisotropy t = triangle_anisotropy(C);
    for (double r : {0.01, 0.1, 0.5, 2.0}) {
      const double exact = oracle::convex_minkowski_area(kTriangle, oracle::body_points(C), r);
      CHECK(triangle_tube_volume(t, r, TriangleVariant::kFilled) == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("disk64: u2 is three supports of unit normals") {
  const TriangleAnisotropy t = triangle_anisotropy(parse_body("disk64"));
  CHECK(t.u2 <= 3.0);
  CHECK(t.u2 >= 3.0 * std::cos(std::numbers::pi / 64));
  CHECK(t.u1 == doctest::Approx(t.u2).epsilon(1e-3));
}

TEST_CASE("boundary tube volume against the Monte Carlo oracle") {
  const ConvexBody C = parse_body("square");
  const TriangleAnisotropy t = triangle_anisotropy(C);
  const double rv = triangle_boundary_validity(t);
  CHECK(rv > 0.0);
  const double r = 0.5 * rv;
  const MonteCarloEstimate mc = minkowski_sum_oracle(unit_triangle_boundary(), C, r, 200000, 7);
  CHECK(std::fabs(triangle_tube_volume(t, r, TriangleVariant::kBoundary) - mc.volume) <= 4 * mc.sigma);
  CHECK_THROWS_CODE(triangle_tube_volume(t, 2 * rv, TriangleVariant::kBoundary), ErrorCode::kRadiusOutsideValidity);
}

TEST_CASE("gasket limits: coefficients, optimizers and chain") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  const GasketLimits L = gasket_content_limits(g);
  CHECK(L.D == doctest::Approx(std::log2(3.0)));
  // Three decimals as printed; four decimals from the defining expressions.
  CHECK(L.S_lower_coef == doctest::Approx(1.107).epsilon(1e-3 / 1.107));
  CHECK(L.M_lower_coef == doctest::Approx(1.148).epsilon(1e-3 / 1.148));
  CHECK(L.M_upper_coef == doctest::Approx(1.150).epsilon(1e-3 / 1.150));
  CHECK(L.S_upper_coef == doctest::Approx(1.170).epsilon(1e-3 / 1.170));
  CHECK(std::fabs(L.S_lower_coef - 1.1074) < 1.5e-4);
  CHECK(std::fabs(L.M_lower_coef - 1.1477) < 1.5e-4);
  CHECK(std::fabs(L.M_upper_coef - 1.1501) < 1.5e-4);
  CHECK(std::fabs(L.S_upper_coef - 1.1701) < 1.5e-4);
  CHECK(std::fabs(L.alpha_max - 1.4763) < 1e-4);
  CHECK(std::fabs(L.beta_max - 1.7669) < 2e-4);
  CHECK(std::fabs(L.beta_min - 1.1856) < 2e-4);
  CHECK(L.S_lower < L.M_lower);
  CHECK(L.M_lower < L.M_upper);
  CHECK(L.M_upper < L.S_upper);
  // The shortened printed form is a factor three off the defining expression.
  CHECK(L.S_lower_short_form_coef * 3 == doctest::Approx(L.S_lower_coef).epsilon(1e-3));
}

TEST_CASE("gasket limits are the envelope of the level functions") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  const GasketLimits L = gasket_content_limits(g);
  double fmax = -1e300, fmin = 1e300, hmax = -1e300, hmin = 1e300;
  for (int i = 0; i <= 10000; ++i) {
    const double a = 1.0 + i / 10000.0;
    fmax = std::max(fmax, g.f_n(40, a) / (2 - g.D));
    fmin = std::min(fmin, g.f_n(40, a) / (2 - g.D));
    hmax = std::max(hmax, g.h_n(40, a));
    hmin = std::min(hmin, g.h_n(40, a));
  }
  CHECK(fmax == doctest::Approx(L.S_upper).epsilon(1e-6));
  CHECK(fmin == doctest::Approx(L.S_lower).epsilon(1e-6));
  CHECK(hmax == doctest::Approx(L.M_upper).epsilon(1e-6));
  CHECK(hmin == doctest::Approx(L.M_lower).epsilon(1e-6));
}

TEST_CASE("gasket quotients of the piecewise V and S stay inside the limits") {
  const GasketProfile g = gasket_profile(parse_body("square"));
  const GasketLimits L = gasket_content_limits(g);
  double mmin = 1e300, mmax = 0, smin = 1e300, smax = 0;
  const double lo = g.interval_lo(30), hi = g.interval_lo(28);
  for (int i = 0; i < 20000; ++i) {
    const double r = lo * std::pow(hi / lo, i / 20000.0);
    const GasketValue v = gasket_eval(g, r);
    const double m = v.V / std::pow(r, 2 - g.D);
    const double s = v.S / ((2 - g.D) * std::pow(r, 1 - g.D));
    mmin = std::min(mmin, m), mmax = std::max(mmax, m);
    smin = std::min(smin, s), smax = std::max(smax, s);
  }
  CHECK(mmin == doctest::Approx(L.M_lower).epsilon(1e-5));
  CHECK(mmax == doctest::Approx(L.M_upper).epsilon(1e-5));
  CHECK(smin == doctest::Approx(L.S_lower).epsilon(1e-5));
  CHECK(smax == doctest::Approx(L.S_upper).epsilon(1e-5));
}

TEST_CASE("gasket V is continuous, non-decreasing, with S its right derivative") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  for (int n = 0; n < 12; ++n) {
    const double b = g.interval_lo(n);
    CHECK(gasket_eval(g, b * (1 - 1e-12)).V == doctest::Approx(gasket_eval(g, b).V).epsilon(1e-9));
  }
  double prev = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double r = 1e-5 * std::pow(1e5, i / 4000.0);
    const GasketValue v = gasket_eval(g, r);
    CHECK(v.V >= prev);
    prev = v.V;
    const double eps = r * 1e-7;
    const double fd = (gasket_eval(g, r + eps).V - v.V) / eps;
    CHECK(fd == doctest::Approx(v.S).epsilon(1e-4));
  }
  CHECK_THROWS_CODE(gasket_eval(g, 0.0), ErrorCode::kNonPositiveRadius);
}

TEST_CASE("gasket V against the Monte Carlo oracle on a deep prefractal") {
  const ConvexBody C = parse_body("disk64");
  const GasketProfile g = gasket_profile(C);
  const double r = 0.1;
  const MonteCarloEstimate mc = minkowski_sum_oracle(sierpinski_gasket(6), C, r, 40000, 3);
  CHECK(std::fabs(gasket_eval(g, r).V - mc.volume) <= 4 * mc.sigma);
}

TEST_CASE("gasket V at large radius is the triangle's tube") {
  const ConvexBody C = parse_body("triangle");
  const GasketProfile g = gasket_profile(C);
  const TriangleAnisotropy t = triangle_anisotropy(C);
  for (double r : {1.0, 3.0}) {
    if (r < g.interval_lo(0)) continue;
    CHECK(gasket_eval(g, r).V == doctest::Approx(triangle_tube_volume(t, r, TriangleVariant::kFilled)).epsilon(1e-12));
  }
}
