#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aniso/convex_body.hpp"
#include "aniso/rng.hpp"
#include "aniso/spec_io.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

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

TEST_CASE("square: volume, radii, support and gauge against closed forms") {
  const ConvexBody sq = parse_body("square");
  CHECK(sq.volume() == doctest::Approx(4.0));
  CHECK(sq.inradius() == doctest::Approx(1.0));
  CHECK(sq.outradius() == doctest::Approx(std::sqrt(2.0)));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec x{rng.uniform(-3, 3), rng.uniform(-3, 3), 0};
    CHECK(sq.gauge(x) == doctest::Approx(std::max(std::fabs(x[0]), std::fabs(x[1]))).epsilon(1e-12));
    CHECK(sq.support(x) == doctest::Approx(std::fabs(x[0]) + std::fabs(x[1])).epsilon(1e-12));
  }
}

TEST_CASE("disk64 gauge brackets the Euclidean norm by the chordal factor") {
  const ConvexBody disk = parse_body("disk64");
  const double chord = std::cos(std::numbers::pi / 64);
  CHECK(disk.inradius() == doctest::Approx(chord));
  CHECK(disk.outradius() == doctest::Approx(1.0));
  CHECK(disk.volume() == doctest::Approx(32.0 * std::sin(2.0 * std::numbers::pi / 64)));
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    const double g = disk.gauge(x);
    CHECK(g >= norm(x) * (1 - 1e-12));
    CHECK(g <= norm(x) / chord * (1 + 1e-12));
  }
}

TEST_CASE("random quadrilaterals: gauge agrees with bisection and the facet form") {
  Rng rng(11);
  for (int b = 0; b < 20; ++b) {
    const ConvexBody C = random_quad(rng);
    const auto pts = oracle::body_points(C);
    CHECK(C.volume() == doctest::Approx(oracle::shoelace(oracle::hull(pts))).epsilon(1e-12));
    for (int i = 0; i < 50; ++i) {
      const Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
      const double ref = oracle::gauge_bisect(pts, x[0], x[1]);
      CHECK(C.gauge(x) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(C.gauge_dual(x) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(norm(x) / C.outradius() <= C.gauge(x) * (1 + 1e-12));
      CHECK(C.gauge(x) <= norm(x) / C.inradius() * (1 + 1e-12));
    }
  }
}

TEST_CASE("gauge is positively homogeneous and subadditive") {
  Rng rng(17);
  const ConvexBody C = random_quad(rng);
  for (int i = 0; i < 200; ++i) {
    const Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    const Vec y{rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    const double t = rng.uniform(0.1, 10);
    CHECK(C.gauge(t * x) == doctest::Approx(t * C.gauge(x)).epsilon(1e-12));
    CHECK(C.gauge(x + y) <= C.gauge(x) + C.gauge(y) + 1e-12);
  }
}

TEST_CASE("triangle preset has inradius 1 and outradius 2") {
  const ConvexBody T = parse_body("triangle");
  CHECK(T.inradius() == doctest::Approx(1.0));
  CHECK(T.outradius() == doctest::Approx(2.0));
  CHECK(T.volume() == doctest::Approx(3.0 * std::sqrt(3.0)));
}

TEST_CASE("3D presets: cube is the max norm, octahedron the l1 norm") {
  const ConvexBody cube = parse_body("cube");
  const ConvexBody oct = parse_body("octahedron");
  CHECK(cube.volume() == doctest::Approx(8.0));
  CHECK(oct.volume() == doctest::Approx(4.0 / 3.0));
  CHECK(oct.inradius() == doctest::Approx(1.0 / std::sqrt(3.0)));
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double linf = std::max({std::fabs(x[0]), std::fabs(x[1]), std::fabs(x[2])});
    const double l1 = std::fabs(x[0]) + std::fabs(x[1]) + std::fabs(x[2]);
    CHECK(cube.gauge(x) == doctest::Approx(linf).epsilon(1e-12));
    CHECK(oct.gauge(x) == doctest::Approx(l1).epsilon(1e-12));
    CHECK(oct.gauge_dual(x) == doctest::Approx(l1).epsilon(1e-12));
    CHECK(oct.support(x) == doctest::Approx(linf).epsilon(1e-12));
  }
}

TEST_CASE("scaling multiplies the volume by r^n") {
  const ConvexBody C = parse_body("triangle");
  CHECK(scale(C, 0.5).volume() == doctest::Approx(C.volume() / 4));
  CHECK(scale(parse_body("cube"), 3).volume() == doctest::Approx(216.0));
  CHECK_THROWS_CODE(scale(C, 0.0), ErrorCode::kNonPositiveScale);
}

TEST_CASE("invalid bodies are rejected") {
  const std::vector<Vec> collinear{{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_CODE(make_body(2, collinear), ErrorCode::kDegenerateBody);
  const std::vector<Vec> offset{{1, 1, 0}, {2, 1, 0}, {1, 2, 0}};
  CHECK_THROWS_CODE(make_body(2, offset), ErrorCode::kOriginNotInterior);
  const std::vector<Vec> touching{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_CODE(make_body(2, touching), ErrorCode::kOriginNotInterior);
  CHECK_THROWS_CODE(regular_polygon(2), ErrorCode::kDegenerateBody);
}

TEST_CASE("interior hull points are discarded") {
  const std::vector<Vec> v{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {0.2, 0.3, 0}, {1, 0, 0}};
  const ConvexBody C = make_body(2, v);
  CHECK(C.vertices().size() == 4);
  CHECK(C.volume() == doctest::Approx(4.0));
}
