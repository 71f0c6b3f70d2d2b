#include <doctest.h>

#include <cmath>
#include <vector>

#include "aniso/rng.hpp"
#include "aniso/site_index.hpp"
#include "aniso/spec_io.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

double brute_force(const std::vector<Vec>& sites, const ConvexBody& C, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& s : sites) best = std::min(best, C.gauge_dual(x - s));
  return best;
}

std::vector<Vec> random_sites(Rng& rng, int count, int dim) {
  std::vector<Vec> s;
  for (int i = 0; i < count; ++i) s.push_back({rng.uniform(), rng.uniform(), dim == 3 ? rng.uniform() : 0.0});
  return s;
}

}  // namespace

TEST_CASE("anisotropic nearest site equals brute force") {
  Rng rng(29);
  for (const char* spec : {"square", "triangle", "disk64", R"({"vertices": [[0.3, -0.2], [1.4, 0.9], [-0.5, 1.2], [-0.8, -0.9]]})"}) {
    const ConvexBody C = parse_body(spec);
    const auto sites = random_sites(rng, 500, 2);
    const SiteIndex index(sites, 2);
    for (int q = 0; q < 300; ++q) {
      const Vec x{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), 0};
      const auto hit = index.nearest(x, C, std::numeric_limits<double>::infinity(), q % 7 == 0 ? q : -1);
      CHECK(hit.value == doctest::Approx(brute_force(sites, C, x)).epsilon(1e-12));
      REQUIRE(hit.index >= 0);
      CHECK(C.gauge(x - index.sites()[hit.index]) == doctest::Approx(hit.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("3D nearest site with the octahedron") {
  Rng rng(31);
  const ConvexBody C = parse_body("octahedron");
  const auto sites = random_sites(rng, 400, 3);
  const SiteIndex index(sites, 3);
  for (int q = 0; q < 200; ++q) {
    const Vec x{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
    CHECK(index.nearest(x, C).value == doctest::Approx(brute_force(sites, C, x)).epsilon(1e-12));
  }
}

TEST_CASE("bound excludes sites at or beyond it") {
  const std::vector<Vec> sites{{0, 0, 0}, {10, 0, 0}};
  const SiteIndex index(sites, 2);
  const ConvexBody C = parse_body("square");
  const auto hit = index.nearest({3, 0, 0}, C, 2.0);
  CHECK(hit.index == -1);
  CHECK(index.nearest({3, 0, 0}, C, 3.5).value == doctest::Approx(3.0));
}

TEST_CASE("Euclidean nearest site") {
  Rng rng(37);
  const auto sites = random_sites(rng, 300, 2);
  const SiteIndex index(sites, 2);
  for (int q = 0; q < 200; ++q) {
    const Vec x{rng.uniform(-1, 2), rng.uniform(-1, 2), 0};
    double best = 1e300;
    for (const Vec& s : sites) best = std::min(best, norm(x - s));
    CHECK(index.nearest_euclidean(x).value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("empty index is rejected") {
  CHECK_THROWS_CODE(SiteIndex({}, 2), ErrorCode::kEmptySet);
}
