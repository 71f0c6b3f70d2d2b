#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "aniso/contents.hpp"
#include "aniso/spec_io.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Profile of an exactly known V with its derivative and a small flat budget.
VolumeProfile synthetic(const std::function<double(double)>& V, const std::function<double(double)>& dV,
                        double set_volume, double r_min = 1e-3, double r_max = 0.128) {
  VolumeProfile p;
  p.dim = 2;
  p.radii = geometric_radii(r_min, r_max, 8);
  for (double r : p.radii) {
    p.V.push_back(V(r));
    p.S.push_back(dV(r));
    p.kappa.push_back(dV(r) / r);
    p.delta.push_back(r * 1e-3);
    p.err_budget.push_back(1e-9 * V(r));
    p.S_budget.push_back(1e-9 * dV(r));
  }
  p.set_volume = set_volume;
  p.V0 = set_volume;
  p.body_volume = 1.0;
  p.inradius = p.outradius = 1.0;
  return p;
}

ContentReport report(const VolumeProfile& p, double s, ContentKind k) { return content_estimate(p, s, k); }

}  // namespace

TEST_CASE("k points: s = 0 contents are k lambda(C)") {
  const double lam = 2.5;
  const VolumeProfile p = synthetic([&](double r) { return 3 * lam * r * r; }, [&](double r) { return 6 * lam * r; }, 0.0);
  for (auto k : {ContentKind::kMinkowski, ContentKind::kOuterMinkowski, ContentKind::kSContent}) {
    const ContentReport c = report(p, 0.0, k);
    CHECK(c.lower == doctest::Approx(3 * lam));
    CHECK(c.upper == doctest::Approx(3 * lam));
    CHECK_FALSE(c.diverges);
  }
  const ContentReport m = report(p, 2.0, ContentKind::kMinkowski);
  CHECK(m.lower == doctest::Approx(p.V.front()));
}

TEST_CASE("filled square: s = 0.5 diverges, s = 1 gives the perimeter") {
  // Unit square with the square body: V = 1 + 4r + 4r^2 exactly.
  const VolumeProfile p = synthetic([](double r) { return 1 + 4 * r + 4 * r * r; }, [](double r) { return 4 + 8 * r; }, 1.0);
  const ContentReport sc = report(p, 0.5, ContentKind::kSContent);
  const ContentReport om = report(p, 0.5, ContentKind::kOuterMinkowski);
  CHECK(sc.diverges);
  CHECK(om.diverges);
  CHECK(sc.upper == kInf);
  CHECK(om.lower == kInf);
  const ContentReport sm1 = report(p, 1.0, ContentKind::kOuterMinkowski);
  CHECK_FALSE(sm1.diverges);
  CHECK(sm1.lower == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(sm1.upper == doctest::Approx(4.0).epsilon(5e-3));
  CHECK(report(p, 1.0, ContentKind::kSContent).lower == doctest::Approx(4.0).epsilon(2e-3));
}

TEST_CASE("content quotients follow their definitions") {
  const VolumeProfile p = synthetic([](double r) { return 2 + r; }, [](double) { return 1.0; }, 2.0);
  const auto q = content_quotients(p, 1.5, ContentKind::kOuterMinkowski);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(q[i] == doctest::Approx(std::pow(p.radii[i], 0.5)));
  const auto s = content_quotients(p, 1.0, ContentKind::kSContent);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(s[i] == doctest::Approx(1.0));
}

TEST_CASE("range and octave checks") {
  const VolumeProfile p = synthetic([](double r) { return r * r; }, [](double r) { return 2 * r; }, 0.0);
  CHECK_THROWS_CODE(report(p, 2.5, ContentKind::kMinkowski), ErrorCode::kSOutOfRange);
  CHECK_THROWS_CODE(report(p, -0.1, ContentKind::kMinkowski), ErrorCode::kSOutOfRange);
  CHECK_THROWS_CODE(report(p, 2.0, ContentKind::kSContent), ErrorCode::kSOutOfRange);
  const VolumeProfile narrow = synthetic([](double r) { return r * r; }, [](double r) { return 2 * r; }, 0.0, 0.05, 0.128);
  CHECK_THROWS_CODE(report(narrow, 0.0, ContentKind::kMinkowski), ErrorCode::kInsufficientOctaves);
}

TEST_CASE("unit-ball normalization") {
  CHECK(omega(0, Normalization::kOmega) == doctest::Approx(1.0));
  CHECK(omega(1, Normalization::kOmega) == doctest::Approx(2.0));
  CHECK(omega(2, Normalization::kOmega) == doctest::Approx(std::numbers::pi));
  CHECK(omega(1, Normalization::kOmegaPrinted) == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(omega(3, Normalization::kNone) == 1.0);
  const VolumeProfile p = synthetic([](double r) { return std::numbers::pi * r * r; }, [](double r) { return 2 * std::numbers::pi * r; }, 0.0);
  const ContentReport c = content_estimate(p, 0.0, ContentKind::kMinkowski, Normalization::kOmega);
  CHECK(c.lower == doctest::Approx(1.0));
  CHECK(c.multiplier == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(parse_normalization("omega") == Normalization::kOmega);
  CHECK_THROWS_CODE(parse_normalization("pi"), ErrorCode::kConfig);
  CHECK(parse_content_kind("SM") == ContentKind::kOuterMinkowski);
}

TEST_CASE("gasket closed-form reports") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  const GasketLimits L = gasket_content_limits(g);
  CHECK(gasket_content_report(g, 1.0, ContentKind::kMinkowski).diverges);
  CHECK(gasket_content_report(g, 1.0, ContentKind::kSContent).lower == kInf);
  CHECK(gasket_content_report(g, 1.7, ContentKind::kMinkowski).upper == 0.0);
  const ContentReport m = gasket_content_report(g, g.D, ContentKind::kMinkowski);
  CHECK(m.lower == L.M_lower);
  CHECK(m.upper == L.M_upper);
  const ContentReport s = gasket_content_report(g, g.D, ContentKind::kSContent);
  CHECK(s.lower == L.S_lower);
  CHECK(s.upper == L.S_upper);
  CHECK(m.method == "closed_form");
}

TEST_CASE("closed-form gasket profile tracks the grid-free V") {
  const GasketProfile g = gasket_profile(parse_body("square"));
  const auto radii = geometric_radii(1e-4, 0.5, 8);
  const VolumeProfile p = gasket_closed_form_profile(g, radii);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.V[i] == gasket_eval(g, radii[i]).V);
  const ContentReport c = content_estimate(p, g.D, ContentKind::kMinkowski);
  const GasketLimits L = gasket_content_limits(g);
  CHECK(c.lower >= L.M_lower * (1 - 1e-3));
  CHECK(c.upper <= L.M_upper * (1 + 1e-3));
}

TEST_CASE("dimension of a pure power law") {
  const VolumeProfile p = synthetic([](double r) { return 3 * std::pow(r, 0.7); }, [](double r) { return 2.1 * std::pow(r, -0.3); }, 0.0);
  const DimensionReport d = dimension_estimate(p);
  CHECK(d.dim == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(d.dim_lower <= d.dim);
  CHECK(d.dim_upper >= d.dim);
  CHECK(d.residual < 1e-9);
  for (double od : d.octave_dims) CHECK(od == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("dimension of the closed-form gasket") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  const DimensionReport d = dimension_estimate(gasket_closed_form_profile(g, geometric_radii(1e-5, 1e-2, 8)));
  CHECK(d.dim == doctest::Approx(std::log2(3.0)).epsilon(2e-3));
}

TEST_CASE("Kneser inequality on the closed-form gasket, and a corrupted control") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  auto scalar = [&](double r) { return gasket_eval(g, r).V; };
  const VolumeFunction V = [&](std::span<const double> rs) {
    std::vector<double> v;
    for (double r : rs) v.push_back(scalar(r));
    return v;
  };
  const KneserVerdict ok = kneser_check(V, 2, 1e-4, 1.0, 10000, 1, closed_form_tolerance(2, scalar));
  CHECK(ok.ok());
  CHECK(ok.trials == 10000);
  CHECK(ok.worst_excess <= 1.0);

  const double jump = 0.05 * scalar(0.01);
  const VolumeFunction bad = [&](std::span<const double> rs) {
    std::vector<double> v = V(rs);
    for (std::size_t i = 0; i < rs.size(); ++i) v[i] += rs[i] >= 0.01 ? jump : 0.0;
    return v;
  };
  const KneserVerdict flagged = kneser_check(bad, 2, 1e-4, 1.0, 10000, 1, closed_form_tolerance(2, scalar));
  CHECK_FALSE(flagged.ok());
  CHECK(flagged.violations.size() <= 16);
  CHECK(flagged.worst_excess > 1.0);
  CHECK_THROWS_CODE(kneser_check(V, 2, 1e-4, 1.0, 10, 1, closed_form_tolerance(2, scalar)), ErrorCode::kInvalidArgument);
  CHECK_THROWS_CODE(kneser_check(V, 2, 1.0, 1.0, 1000, 1, closed_form_tolerance(2, scalar)), ErrorCode::kRangeTooNarrow);
}

TEST_CASE("Kneser inequality on a grid profile of a point cloud") {
  const ConvexBody C = parse_body(R"({"vertices": [[0.9, 0.2], [-0.3, 1.1], [-1.2, -0.4], [0.5, -0.7]]})");
  const CompactSet E = parse_set("random-points:6:3", C);
  const DistanceField f = distance_field(E, C, make_grid(E, C, 1.0 / 256, 0.2), {0.0, 1});
  const VolumeProfile p = volume_profile(f, geometric_radii(0.02, 0.2, 8));
  const VolumeFunction V = [&](std::span<const double> rs) { return volumes_at(f, rs); };
  const KneserVerdict k = kneser_check(V, 2, 0.02, 0.2, 2000, 5, grid_tolerance(p));
  CHECK(k.ok());
}

TEST_CASE("three-valued classification") {
  CHECK(classify(0.0, 1.0) == Verdict::kHolds);
  CHECK(classify(-1.0, 1.0) == Verdict::kHolds);
  CHECK(classify(-1.5, 1.0) == Verdict::kInconclusive);
  CHECK(classify(-2.5, 1.0) == Verdict::kViolated);
  CHECK(classify(-1e-12, 0.0) == Verdict::kViolated);
}

TEST_CASE("ledger on the closed-form gasket holds everywhere") {
  const GasketProfile g = gasket_profile(parse_body("disk64"));
  auto rep = [&](double s, ContentKind k) { return gasket_content_report(g, s, k); };
  LedgerInput in;
  in.n = 2;
  in.s = g.D;
  in.body_volume = g.body_volume;
  in.M = rep(g.D, ContentKind::kMinkowski);
  in.SM = rep(g.D, ContentKind::kOuterMinkowski);
  in.S = rep(g.D, ContentKind::kSContent);
  in.S_t = rep(g.D / 2, ContentKind::kSContent);
  in.S_n1 = rep(1.0, ContentKind::kSContent);
  const auto entries = inequality_ledger(in);
  REQUIRE(entries.size() == 6);
  for (const auto& e : entries) CHECK_MESSAGE(e.verdict == Verdict::kHolds, e.name);
  CHECK(overall(entries) == Verdict::kHolds);
  CHECK(entries[0].slack > 0.0);  // the chain is strict for the gasket
  CHECK(entries[1].slack > 0.0);
  CHECK(entries[2].slack > 0.0);

  LedgerInput wrong = in;
  wrong.S_t = rep(g.D, ContentKind::kSContent);
  CHECK_THROWS_CODE(inequality_ledger(wrong), ErrorCode::kMismatchedReports);
  wrong = in;
  wrong.M = gasket_content_report(g, g.D, ContentKind::kMinkowski, Normalization::kOmega);
  CHECK_THROWS_CODE(inequality_ledger(wrong), ErrorCode::kMismatchedReports);
  wrong = in;
  wrong.s = 2.0;
  CHECK_THROWS_CODE(inequality_ledger(wrong), ErrorCode::kSOutOfRange);
}

TEST_CASE("ledger flags a fabricated violation") {
  const VolumeProfile p = synthetic([](double r) { return 3 * r * r; }, [](double r) { return 6 * r; }, 0.0);
  LedgerInput in;
  in.n = 2;
  in.s = 0.0;
  in.body_volume = 1.0;
  in.M = report(p, 0.0, ContentKind::kMinkowski);
  in.SM = report(p, 0.0, ContentKind::kOuterMinkowski);
  in.S = report(p, 0.0, ContentKind::kSContent);
  in.S_t = report(p, 0.0, ContentKind::kSContent);
  in.S_n1 = report(p, 1.0, ContentKind::kSContent);
  const auto good = inequality_ledger(in);
  CHECK(overall(good) == Verdict::kHolds);
  CHECK(good[0].equality);
  in.S.lower *= 1.5;  // S_* above M_* is impossible
  const auto bad = inequality_ledger(in);
  CHECK(bad[0].verdict == Verdict::kViolated);
  CHECK(overall(bad) == Verdict::kViolated);
}

TEST_CASE("kappa monotonicity") {
  const VolumeProfile conv = synthetic([](double r) { return 1 + 4 * r + 4 * r * r; }, [](double r) { return 4 + 8 * r; }, 1.0);
  CHECK(kappa_monotonicity(conv).verdict == Verdict::kHolds);
  const VolumeProfile rising = synthetic([](double r) { return r * r * r; }, [](double r) { return 3 * r * r; }, 0.0);
  CHECK(kappa_monotonicity(rising).verdict == Verdict::kViolated);
}

TEST_CASE("grid content of three separated points") {
  const ConvexBody C = parse_body("disk64");
  const CompactSet E = make_points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const double h = 1.0 / 400;
  const DistanceField f = distance_field(E, C, make_grid(E, C, h, 0.08), {0.0, 1});
  const VolumeProfile p = volume_profile(f, geometric_radii(0.01, 0.08, 8));
  const ContentReport m = content_estimate(p, 0.0, ContentKind::kMinkowski);
  CHECK(m.lower == doctest::Approx(3 * C.volume()).epsilon(0.02));
  CHECK(m.upper == doctest::Approx(3 * C.volume()).epsilon(0.02));
  CHECK(p.kappa.front() / 2 == doctest::Approx(3 * C.volume()).epsilon(0.02));
}

TEST_CASE("decomposition of disjoint parts is additive") {
  const ConvexBody C = parse_body("square");
  const std::vector<CompactSet> parts{make_points({{0, 0, 0}}), make_points({{3, 0, 0}}),
                                      make_segments({{{0, 2, 0}, {1, 2, 0}}})};
  const DecompositionVerdict d = decomposition_check(parts, 1.0, C, 1.0 / 256, {0.02, 0.16, 8});
  CHECK(d.verdict == Verdict::kHolds);
  CHECK(std::fabs(d.rel_diff_lower) < 1e-3);
  CHECK(std::fabs(d.rel_diff_upper) < 1e-3);
  CHECK(d.parts.size() == 3);

  const std::vector<CompactSet> overlapping{unit_triangle(), translate(unit_triangle(), {0.5, 0, 0})};
  CHECK_THROWS_CODE(decomposition_check(overlapping, 1.0, C, 1.0 / 64, {0.05, 0.4, 8}), ErrorCode::kOverlappingParts);
}
