#include "aniso/contents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aniso/error.hpp"
#include "aniso/rng.hpp"
#include "aniso/site_index.hpp"

namespace aniso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceThreshold = 1e6;
constexpr double kDivergenceExponent = 0.25;
constexpr std::size_t kMinRadii = 16;
constexpr double kMinOctaves = 3.0;
constexpr double kRelEps = 1e-9;

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool ok = false;
};

Fit fit_loglog(std::span<const double> r, std::span<const double> y) {
  Fit f;
  std::size_t m = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double x = std::log(r[i]), v = std::log(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++m;
  }
  if (m < 2) return f;
  const double det = m * sxx - sx * sx;
  if (det <= 0.0) return f;
  f.slope = (m * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double e = std::log(y[i]) - (f.intercept + f.slope * std::log(r[i]));
    ss += e * e;
  }
  f.residual = std::sqrt(ss / m);
  f.ok = true;
  return f;
}

// Index ranges [begin, end) of the dyadic octaves [r0 2^k, r0 2^(k+1)).
std::vector<std::pair<std::size_t, std::size_t>> octaves(std::span<const double> radii) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const double r0 = radii.front();
  std::size_t begin = 0;
  while (begin < radii.size()) {
    const int k = static_cast<int>(std::floor(std::log2(radii[begin] / r0) + kRelEps));
    const double hi = std::ldexp(r0, k + 1) * (1.0 - kRelEps);
    std::size_t end = begin;
    while (end < radii.size() && radii[end] < hi) ++end;
    out.emplace_back(begin, end);
    begin = end;
  }
  // A lone trailing radius at the top octave edge joins the previous octave.
  if (out.size() > 1 && out.back().second - out.back().first == 1) {
    out[out.size() - 2].second = out.back().second;
    out.pop_back();
  }
  return out;
}

std::size_t window_end(std::span<const double> radii) {
  const double limit = 4.0 * radii.front() * (1.0 + kRelEps);
  std::size_t end = 0;
  while (end < radii.size() && radii[end] <= limit) ++end;
  return end;
}

void check_profile(const VolumeProfile& p, double s, ContentKind kind) {
  const double n = p.dim;
  if (!(s >= 0.0 && s <= n)) throw Error(ErrorCode::kSOutOfRange, "s must lie in [0, n]");
  if (kind == ContentKind::kSContent && !(s < n)) throw Error(ErrorCode::kSOutOfRange, "the S-content needs s < n");
  if (p.size() < kMinRadii) {
    throw Error(ErrorCode::kInsufficientOctaves,
                "need at least 16 radii, profile has " + std::to_string(p.size()));
  }
  if (std::log2(p.radii.back() / p.radii.front()) < kMinOctaves - kRelEps) {
    throw Error(ErrorCode::kInsufficientOctaves, "radii must span at least 3 octaves");
  }
}

std::vector<double> quotient_budgets(const VolumeProfile& p, double s, ContentKind kind) {
  const double n = p.dim;
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.radii[i];
    out[i] = kind == ContentKind::kSContent ? p.S_budget[i] / ((n - s) * std::pow(r, n - s - 1.0))
                                            : p.err_budget[i] / std::pow(r, n - s);
  }
  return out;
}

// +inf sentinel: the quotient is huge, or it grows steadily as r decreases
// through the finest octave at a power rate of at least kDivergenceExponent.
bool diverging(std::span<const double> radii, std::span<const double> q, std::span<const double> budget,
               std::size_t finest_end) {
  for (std::size_t i = 0; i < finest_end; ++i) {
    if (q[i] > kDivergenceThreshold) return true;
  }
  if (finest_end < 2) return false;
  for (std::size_t i = 0; i + 1 < finest_end; ++i) {
    if (!(q[i] > 0.0) || q[i] + budget[i] + budget[i + 1] < q[i + 1]) return false;
  }
  if (!(q[finest_end - 1] > 0.0)) return false;
  const Fit f = fit_loglog(radii.first(finest_end), q.first(finest_end));
  return f.ok && -f.slope >= kDivergenceExponent;
}

}  // namespace

std::string to_string(ContentKind kind) {
  switch (kind) {
    case ContentKind::kMinkowski: return "minkowski";
    case ContentKind::kOuterMinkowski: return "outer";
    case ContentKind::kSContent: return "s-content";
  }
  return "?";
}

std::string to_string(Normalization norm) {
  switch (norm) {
    case Normalization::kNone: return "none";
    case Normalization::kOmega: return "omega";
    case Normalization::kOmegaPrinted: return "omega-printed";
  }
  return "?";
}

ContentKind parse_content_kind(const std::string& text) {
  if (text == "minkowski" || text == "M") return ContentKind::kMinkowski;
  if (text == "outer" || text == "SM" || text == "outer-minkowski") return ContentKind::kOuterMinkowski;
  if (text == "s-content" || text == "S" || text == "scontent") return ContentKind::kSContent;
  throw Error(ErrorCode::kConfig, "unknown content kind '" + text + "' (minkowski, outer, s-content)");
}

Normalization parse_normalization(const std::string& text) {
  if (text == "none") return Normalization::kNone;
  if (text == "omega") return Normalization::kOmega;
  if (text == "omega-printed") return Normalization::kOmegaPrinted;
  throw Error(ErrorCode::kConfig, "unknown normalization '" + text + "' (none, omega, omega-printed)");
}

double omega(double t, Normalization norm) {
  switch (norm) {
    case Normalization::kNone: return 1.0;
    case Normalization::kOmega: return std::pow(std::numbers::pi, t / 2.0) / std::tgamma(1.0 + t / 2.0);
    case Normalization::kOmegaPrinted: return std::pow(std::numbers::pi, t / 2.0) / std::tgamma(1.0 + t);
  }
  return 1.0;
}

std::vector<double> content_quotients(const VolumeProfile& p, double s, ContentKind kind) {
  const double n = p.dim;
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.radii[i];
    switch (kind) {
      case ContentKind::kMinkowski: q[i] = p.V[i] / std::pow(r, n - s); break;
      case ContentKind::kOuterMinkowski: q[i] = (p.V[i] - p.set_volume) / std::pow(r, n - s); break;
      case ContentKind::kSContent: q[i] = p.S[i] / ((n - s) * std::pow(r, n - s - 1.0)); break;
    }
  }
  return q;
}

ContentReport content_estimate(const VolumeProfile& p, double s, ContentKind kind, Normalization norm) {
  check_profile(p, s, kind);
  ContentReport rep;
  rep.n = p.dim;
  rep.s = s;
  rep.kind = kind;
  rep.method = p.method;
  rep.normalization = norm;
  rep.multiplier = 1.0 / omega(p.dim - s, norm);

  const std::vector<double> q = content_quotients(p, s, kind);
  const std::vector<double> qb = quotient_budgets(p, s, kind);
  const auto octs = octaves(p.radii);
  for (const auto& [b, e] : octs) {
    OctaveRow row{p.radii[b], e < p.size() ? p.radii[e] : p.radii[e - 1], kInf, -kInf};
    for (std::size_t i = b; i < e; ++i) {
      row.q_min = std::min(row.q_min, q[i] * rep.multiplier);
      row.q_max = std::max(row.q_max, q[i] * rep.multiplier);
    }
    rep.octave_table.push_back(row);
  }

  const std::size_t wend = window_end(p.radii);
  rep.window_lo = p.radii.front();
  rep.window_hi = p.radii[wend - 1];

  if (kind == ContentKind::kMinkowski && s == p.dim) {
    rep.lower = rep.upper = p.V.front() * rep.multiplier;
    rep.lower_budget = rep.upper_budget = p.err_budget.front() * rep.multiplier;
    return rep;
  }
  if (diverging(p.radii, q, qb, octs.front().second)) {
    rep.diverges = true;
    rep.lower = rep.upper = kInf;
    return rep;
  }
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < wend; ++i) {
    if (q[i] < q[lo]) lo = i;
    if (q[i] > q[hi]) hi = i;
  }
  rep.lower = q[lo] * rep.multiplier;
  rep.upper = q[hi] * rep.multiplier;
  rep.lower_budget = qb[lo] * rep.multiplier;
  rep.upper_budget = qb[hi] * rep.multiplier;
  return rep;
}

ContentReport gasket_content_report(const GasketProfile& g, double s, ContentKind kind, Normalization norm) {
  if (!(s >= 0.0 && s <= 2.0)) throw Error(ErrorCode::kSOutOfRange, "s must lie in [0, 2]");
  if (kind == ContentKind::kSContent && !(s < 2.0)) throw Error(ErrorCode::kSOutOfRange, "the S-content needs s < n");
  ContentReport rep;
  rep.n = 2;
  rep.s = s;
  rep.kind = kind;
  rep.method = "closed_form";
  rep.normalization = norm;
  rep.multiplier = 1.0 / omega(2.0 - s, norm);
  if (std::fabs(s - g.D) <= 1e-12) {
    const GasketLimits L = gasket_content_limits(g);
    const bool sc = kind == ContentKind::kSContent;
    rep.lower = (sc ? L.S_lower : L.M_lower) * rep.multiplier;
    rep.upper = (sc ? L.S_upper : L.M_upper) * rep.multiplier;
  } else if (s < g.D) {
    rep.lower = rep.upper = kInf;
    rep.diverges = true;
  }
  // Rounding of the closed-form expressions.
  rep.lower_budget = std::isfinite(rep.lower) ? 1e-12 * rep.lower : 0.0;
  rep.upper_budget = std::isfinite(rep.upper) ? 1e-12 * rep.upper : 0.0;
  return rep;
}

VolumeProfile gasket_closed_form_profile(const GasketProfile& g, std::span<const double> radii) {
  VolumeProfile p;
  p.dim = 2;
  p.method = "closed_form";
  p.body_volume = g.body_volume;
  p.set_descriptor = "gasket(exact)";
  for (const double r : radii) {
    const GasketValue v = gasket_eval(g, r);
    p.radii.push_back(r);
    p.V.push_back(v.V);
    p.S.push_back(v.S);
    p.kappa.push_back(v.S / r);
    p.delta.push_back(0.0);
    p.err_budget.push_back(1e-12 * v.V);
    p.S_budget.push_back(1e-12 * v.S);
  }
  return p;
}

DimensionReport dimension_estimate(const VolumeProfile& p) {
  if (p.size() < 3 || std::log2(p.radii.back() / p.radii.front()) < kMinOctaves - kRelEps) {
    throw Error(ErrorCode::kInsufficientOctaves, "dimension estimate needs radii spanning 3 octaves");
  }
  const double n = p.dim;
  DimensionReport rep;
  const std::size_t wend = std::max<std::size_t>(window_end(p.radii), 2);
  rep.window_lo = p.radii.front();
  rep.window_hi = p.radii[wend - 1];
  const std::span<const double> r(p.radii), v(p.V);
  const Fit fit = fit_loglog(r.first(wend), v.first(wend));
  if (!fit.ok) throw Error(ErrorCode::kInvalidArgument, "volumes must be positive to fit a dimension");
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.residual = fit.residual;
  rep.dim = std::clamp(n - fit.slope, 0.0, n);

  rep.dim_lower = rep.dim_upper = rep.dim;
  for (const auto& [b, e] : octaves(p.radii)) {
    if (e - b < 2) continue;
    const Fit f = fit_loglog(r.subspan(b, e - b), v.subspan(b, e - b));
    if (!f.ok) continue;
    const double d = std::clamp(n - f.slope, 0.0, n);
    rep.octave_dims.push_back(d);
    if (e <= wend) {
      rep.dim_lower = std::min(rep.dim_lower, d);
      rep.dim_upper = std::max(rep.dim_upper, d);
    }
    OctaveRow row{p.radii[b], e < p.size() ? p.radii[e] : p.radii[e - 1], kInf, -kInf};
    for (std::size_t i = b; i < e; ++i) {
      const double q = p.V[i] / std::pow(p.radii[i], n - rep.dim);
      row.q_min = std::min(row.q_min, q);
      row.q_max = std::max(row.q_max, q);
    }
    rep.oscillation.push_back(row);
  }
  return rep;
}

KneserVerdict kneser_check(const VolumeFunction& V, int n, double r_lo, double r_hi, std::size_t trials,
                           std::uint64_t seed, const KneserTolerance& tol) {
  if (trials < 100) throw Error(ErrorCode::kInvalidArgument, "need at least 100 trials");
  if (!(r_lo > 0.0) || !(r_hi > r_lo * (1.0 + 1e-6))) {
    throw Error(ErrorCode::kRangeTooNarrow, "Kneser check needs 0 < r_lo < r_hi");
  }
  Rng rng(seed);
  const double log_span = std::log(r_hi / r_lo);
  std::vector<double> a(trials), b(trials), t(trials), radii;
  radii.reserve(4 * trials);
  for (std::size_t k = 0; k < trials; ++k) {
    t[k] = std::exp(rng.uniform() * log_span);
    const double b_hi = std::min(r_hi / t[k], r_hi);
    b[k] = std::min(b_hi, r_lo * std::exp(rng.uniform() * std::log(b_hi / r_lo)));
    a[k] = rng.uniform(r_lo, b[k]);
    radii.insert(radii.end(), {a[k], b[k], t[k] * a[k], std::min(t[k] * b[k], r_hi)});
  }
  const std::vector<double> vals = V(radii);
  if (vals.size() != radii.size()) throw Error(ErrorCode::kInvalidArgument, "volume function returned the wrong count");

  KneserVerdict out;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const double* v = &vals[4 * k];
    const double tn = std::pow(t[k], n);
    const double lhs = v[3] - v[2];
    const double rhs = tn * (v[1] - v[0]);
    const double tl = tol(a[k], b[k], t[k]);
    const double excess = tl > 0.0 ? (lhs - rhs) / tl : (lhs > rhs ? kInf : 0.0);
    out.worst_excess = std::max(out.worst_excess, excess);
    if (lhs > rhs + tl) {
      ++out.violation_count;
      if (out.violations.size() < 16) out.violations.push_back({a[k], b[k], t[k], lhs, rhs, tl});
    }
  }
  return out;
}

KneserTolerance closed_form_tolerance(int n, const std::function<double(double)>& V) {
  return [n, V](double, double b, double t) { return 1e-9 * std::max(1.0, std::pow(t, n) * std::fabs(V(b))); };
}

KneserTolerance grid_tolerance(const VolumeProfile& profile) {
  return [&profile](double, double b, double t) {
    return 4.0 * std::max(profile.budget_at(t * b), std::pow(t, profile.dim) * profile.budget_at(b));
  };
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kViolated: return "violated";
  }
  return "?";
}

Verdict classify(double slack, double budget) {
  if (slack >= -budget) return Verdict::kHolds;
  if (slack >= -2.0 * budget) return Verdict::kInconclusive;
  return Verdict::kViolated;
}

namespace {

LedgerEntry compare(std::string name, std::string statement, double lhs, double rhs, double budget,
                    double equality_rel) {
  LedgerEntry e{std::move(name), std::move(statement), lhs, rhs, 0.0, budget, Verdict::kHolds, false};
  if (lhs == kInf) {
    e.slack = rhs == kInf ? 0.0 : kInf;
    e.equality = rhs == kInf;
    return e;
  }
  if (rhs == kInf) {
    e.slack = -kInf;
    e.verdict = Verdict::kViolated;
    return e;
  }
  e.slack = lhs - rhs;
  e.verdict = classify(e.slack, budget);
  e.equality = std::fabs(e.slack) <= std::max(budget, equality_rel * std::max(std::fabs(lhs), std::fabs(rhs)));
  return e;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kMismatchedReports, what);
}

}  // namespace

std::vector<LedgerEntry> inequality_ledger(const LedgerInput& in, double equality_rel) {
  const double n = in.n;
  const double s = in.s;
  if (!(s >= 0.0 && s < n)) throw Error(ErrorCode::kSOutOfRange, "the ledger needs s in [0, n)");
  const double t = s * (n - 1.0) / n;
  const ContentReport* all[] = {&in.M, &in.SM, &in.S, &in.S_t, &in.S_n1};
  for (const auto* r : all) {
    require(r->n == in.n, "reports differ in dimension");
    require(r->method == in.M.method, "reports differ in method");
    require(r->normalization == Normalization::kNone, "the ledger needs unnormalized reports");
  }
  require(in.M.kind == ContentKind::kMinkowski && in.SM.kind == ContentKind::kOuterMinkowski &&
              in.S.kind == ContentKind::kSContent && in.S_t.kind == ContentKind::kSContent &&
              in.S_n1.kind == ContentKind::kSContent,
          "report kinds do not match their roles");
  auto same = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(1.0, std::fabs(y)); };
  require(same(in.M.s, s) && same(in.SM.s, s) && same(in.S.s, s), "reports differ in s");
  require(same(in.S_t.s, t), "S_t report must be at t = s (n-1)/n");
  require(same(in.S_n1.s, n - 1.0), "S_n1 report must be at s = n - 1");

  const bool outer = in.set_volume > 0.0;
  const ContentReport& B = outer ? in.SM : in.M;
  const std::string m = outer ? "SM" : "M";
  std::vector<LedgerEntry> out;
  out.push_back(compare("lemma36_lower", m + "_* >= S_*", B.lower, in.S.lower, B.lower_budget + in.S.lower_budget,
                        equality_rel));
  out.push_back(compare("lemma36_middle", m + "^* >= " + m + "_*", B.upper, B.lower,
                        B.upper_budget + B.lower_budget, equality_rel));
  out.push_back(compare("lemma36_upper", "S^* >= " + m + "^*", in.S.upper, B.upper,
                        in.S.upper_budget + B.upper_budget, equality_rel));
  const double k38 = (n - s) / n;
  out.push_back(compare("lemma38", m + "^* >= (n-s)/n S^*", B.upper, k38 * in.S.upper,
                        B.upper_budget + k38 * in.S.upper_budget, equality_rel));

  const double c = (n - t) / (n * std::pow(in.body_volume, 1.0 / n));
  const double e = (n - 1.0) / n;
  const double rhs39 = std::pow(in.M.lower, e);
  const double d39 = in.M.lower > 0.0 && std::isfinite(in.M.lower) ? e * std::pow(in.M.lower, -1.0 / n) * in.M.lower_budget
                                                                   : 0.0;
  out.push_back(compare("thm39", "c S^t_* >= (M_*)^((n-1)/n)", c * in.S_t.lower, rhs39,
                        c * in.S_t.lower_budget + d39, equality_rel));
  const double rhs41 = n * std::pow(in.body_volume, 1.0 / n) * std::pow(in.set_volume, e);
  out.push_back(compare("prop41", "S^(n-1)_* >= n lambda(C)^(1/n) lambda(E)^((n-1)/n)", in.S_n1.lower, rhs41,
                        in.S_n1.lower_budget, equality_rel));
  return out;
}

LedgerEntry kappa_monotonicity(const VolumeProfile& p) {
  if (p.size() < 2) throw Error(ErrorCode::kInvalidArgument, "kappa monotonicity needs at least two radii");
  LedgerEntry worst;
  worst.name = "kappa_monotone";
  worst.statement = "kappa(r) >= kappa(r') for r < r'";
  double worst_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double tol = p.S_budget[i] / std::pow(p.radii[i], p.dim - 1) +
                       p.S_budget[i + 1] / std::pow(p.radii[i + 1], p.dim - 1) +
                       1e-12 * std::max(std::fabs(p.kappa[i]), std::fabs(p.kappa[i + 1]));
    const double slack = p.kappa[i] - p.kappa[i + 1];
    const double ratio = -slack / tol;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst.lhs = p.kappa[i];
      worst.rhs = p.kappa[i + 1];
      worst.slack = slack;
      worst.budget = tol;
    }
  }
  worst.verdict = classify(worst.slack, worst.budget);
  worst.equality = std::fabs(worst.slack) <= worst.budget;
  return worst;
}

Verdict overall(std::span<const LedgerEntry> entries) {
  Verdict v = Verdict::kHolds;
  for (const auto& e : entries) v = std::max(v, e.verdict);
  return v;
}

namespace {

void check_disjoint(const std::vector<CompactSet>& parts, double spacing) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      const Box bi = bounding_box(parts[i]), bj = bounding_box(parts[j]);
      bool apart = false;
      for (int a = 0; a < parts[i].dim; ++a) apart = apart || bi.hi[a] < bj.lo[a] || bj.hi[a] < bi.lo[a];
      if (apart) continue;
      const PointCloud si = sample_boundary(parts[i], spacing);
      const PointCloud sj = sample_boundary(parts[j], spacing);
      const SiteIndex index(sj.points, parts[j].dim);
      for (const auto& p : si.points) {
        if (index.nearest_euclidean(p).value <= 1e-12) {
          throw Error(ErrorCode::kOverlappingParts, "parts " + std::to_string(i) + " and " + std::to_string(j) + " touch");
        }
      }
      // A part lying inside a polygon of the other never comes near its boundary.
      auto inside = [](const CompactSet& region, const PointCloud& probe) {
        bool hit = false;
        for_each_leaf(region, [&](const Shape& leaf) {
          if (const auto* poly = std::get_if<PolygonRegion>(&leaf)) {
            for (const auto& q : probe.points) hit = hit || contains_point(*poly, q);
          }
        });
        return hit;
      };
      if (inside(parts[i], sj) || inside(parts[j], si)) {
        throw Error(ErrorCode::kOverlappingParts, "parts " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
}

ContentReport grid_content(const CompactSet& set, double s, const ConvexBody& body, double h,
                           const std::vector<double>& radii, ContentKind kind, const FieldOptions& opts) {
  const Grid grid = make_grid(set, body, h, radii.back());
  const DistanceField field = distance_field(set, body, grid, opts);
  return content_estimate(volume_profile(field, radii), s, kind);
}

}  // namespace

DecompositionVerdict decomposition_check(const std::vector<CompactSet>& parts, double s, const ConvexBody& body,
                                         double h, const RadiiSpec& spec, ContentKind kind,
                                         const FieldOptions& opts) {
  if (parts.empty()) throw Error(ErrorCode::kEmptySet, "no parts given");
  check_disjoint(parts, h);
  const std::vector<double> radii = geometric_radii(spec.r_min, spec.r_max, spec.per_octave);

  DecompositionVerdict out;
  out.whole = grid_content(parts.size() == 1 ? parts.front() : make_union(parts), s, body, h, radii, kind, opts);
  double budget_lower = out.whole.lower_budget, budget_upper = out.whole.upper_budget;
  for (const auto& part : parts) {
    out.parts.push_back(grid_content(part, s, body, h, radii, kind, opts));
    out.sum_lower += out.parts.back().lower;
    out.sum_upper += out.parts.back().upper;
    budget_lower += out.parts.back().lower_budget;
    budget_upper += out.parts.back().upper_budget;
  }
  out.budget = std::max(budget_lower, budget_upper);
  auto rel = [](double x, double y) {
    if (x == y) return 0.0;
    return y != 0.0 && std::isfinite(y) ? (x - y) / std::fabs(y) : kInf;
  };
  out.rel_diff_lower = rel(out.whole.lower, out.sum_lower);
  out.rel_diff_upper = rel(out.whole.upper, out.sum_upper);
  auto diff = [](double x, double y) { return x == y ? 0.0 : std::fabs(x - y); };
  out.verdict = std::max(classify(-diff(out.whole.lower, out.sum_lower), budget_lower),
                         classify(-diff(out.whole.upper, out.sum_upper), budget_upper));
  return out;
}

}  // namespace aniso
