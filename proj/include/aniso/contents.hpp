#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aniso/aniso_field.hpp"
#include "aniso/closed_form.hpp"
#include "aniso/compact_set.hpp"
#include "aniso/convex_body.hpp"

namespace aniso {

enum class ContentKind {
  kMinkowski,       // V(r) / r^(n-s)
  kOuterMinkowski,  // (V(r) - λ(E)) / r^(n-s); at s = n-1 this is the SM content
  kSContent,        // S(r) / ((n-s) r^(n-s-1)), s < n
};

/// Optional report multiplier 1/ω_(n-s).
enum class Normalization {
  kNone,
  kOmega,         // ω_t = π^(t/2) / Γ(1 + t/2), the unit-ball volume
  kOmegaPrinted,  // ω_t = π^(t/2) / Γ(1 + t)
};

std::string to_string(ContentKind kind);
std::string to_string(Normalization norm);
ContentKind parse_content_kind(const std::string& text);
Normalization parse_normalization(const std::string& text);

double omega(double t, Normalization norm);

/// Quotient extremes over the radii in [r_lo, r_hi).
struct OctaveRow {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
};

/// Finite-scale envelope of a content quotient. lower/upper are the min/max
/// over the finest two octaves; +inf marks a diverging quotient.
struct ContentReport {
  int n = 2;
  double s = 0.0;
  ContentKind kind = ContentKind::kMinkowski;
  double lower = 0.0;
  double upper = 0.0;
  double lower_budget = 0.0;  // absolute error allowance on lower / upper
  double upper_budget = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<OctaveRow> octave_table;
  std::string method = "grid";
  Normalization normalization = Normalization::kNone;
  double multiplier = 1.0;
  bool diverges = false;
};

/// Content quotient at every radius of the profile, unnormalized.
std::vector<double> content_quotients(const VolumeProfile& profile, double s, ContentKind kind);

/// Throws kSOutOfRange (s outside [0, n], or s = n for kSContent) and
/// kInsufficientOctaves (fewer than 16 radii or less than 3 octaves).
ContentReport content_estimate(const VolumeProfile& profile, double s, ContentKind kind,
                               Normalization norm = Normalization::kNone);

/// Exact gasket contents: +inf below D, 0 above, the closed-form limits at D.
ContentReport gasket_content_report(const GasketProfile& g, double s, ContentKind kind,
                                    Normalization norm = Normalization::kNone);

/// Tabulates the closed-form gasket V and S as a profile (zero budgets).
VolumeProfile gasket_closed_form_profile(const GasketProfile& g, std::span<const double> radii);

struct DimensionReport {
  double dim = 0.0;
  double dim_lower = 0.0;
  double dim_upper = 0.0;
  double slope = 0.0;      // of log V against log r over the finest window
  double intercept = 0.0;
  double residual = 0.0;   // RMS of the fit
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<double> octave_dims;    // n minus the per-octave slopes, finest first
  std::vector<OctaveRow> oscillation; // V / r^(n - dim) per octave
};

/// Throws kInsufficientOctaves with fewer than 3 octaves of radii.
DimensionReport dimension_estimate(const VolumeProfile& profile);

/// V evaluated at a batch of radii.
using VolumeFunction = std::function<std::vector<double>(std::span<const double>)>;
/// Tolerance for one sample (a, b, t).
using KneserTolerance = std::function<double(double a, double b, double t)>;

struct KneserViolation {
  double a = 0.0, b = 0.0, t = 0.0;
  double lhs = 0.0;  // V(tb) - V(ta)
  double rhs = 0.0;  // t^n (V(b) - V(a))
  double tol = 0.0;
};

struct KneserVerdict {
  std::size_t trials = 0;
  std::size_t violation_count = 0;
  std::vector<KneserViolation> violations;  // the first few, for reporting
  double worst_excess = 0.0;                // max of (lhs - rhs) / tol, <= 1 when clean
  bool ok() const { return violation_count == 0; }
};

/// Samples t log-uniform in [1, r_hi/r_lo], b log-uniform in [r_lo, r_hi/t]
/// and a uniform in [r_lo, b], then tests V(tb) - V(ta) <= t^n (V(b) - V(a)) + tol.
/// Throws kRangeTooNarrow and kInvalidArgument (trials < 100).
KneserVerdict kneser_check(const VolumeFunction& V, int n, double r_lo, double r_hi, std::size_t trials,
                           std::uint64_t seed, const KneserTolerance& tol);

/// 1e-9, scaled up only by the magnitude of the right-hand side.
KneserTolerance closed_form_tolerance(int n, const std::function<double(double)>& V);
/// 4 times the profile's V budget, carried to the right-hand side's scale.
KneserTolerance grid_tolerance(const VolumeProfile& profile);

enum class Verdict { kHolds, kInconclusive, kViolated };
std::string to_string(Verdict v);

/// One inequality lhs >= rhs.
struct LedgerEntry {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;   // lhs - rhs
  double budget = 0.0;  // combined error allowance
  Verdict verdict = Verdict::kHolds;
  bool equality = false;  // |slack| within tolerance
};

/// slack >= -budget holds, down to -2 budget is inconclusive, below that violated.
Verdict classify(double slack, double budget);

struct LedgerInput {
  int n = 2;
  double s = 0.0;
  double body_volume = 0.0;
  double set_volume = 0.0;
  ContentReport M;     // Minkowski at s
  ContentReport SM;    // outer Minkowski at s
  ContentReport S;     // S-content at s
  ContentReport S_t;   // S-content at t = s (n-1)/n
  ContentReport S_n1;  // S-content at n - 1
};

/// The S_* <= M_* <= M^* <= S^* chain (outer contents when λ(E) > 0), the (n-s)/n bound, the
/// lower-content isoperimetric bound and the perimeter bound at s = n-1.
/// Throws kMismatchedReports when the reports disagree in n, s, kind or method.
std::vector<LedgerEntry> inequality_ledger(const LedgerInput& in, double equality_rel = 0.02);

/// κ(r) = S(r) / r^(n-1) must not increase with r. Adjacent radii are compared
/// against their S budgets; the entry reports the worst pair.
LedgerEntry kappa_monotonicity(const VolumeProfile& profile);

/// Worst verdict of a list.
Verdict overall(std::span<const LedgerEntry> entries);

struct RadiiSpec {
  double r_min = 0.0;
  double r_max = 0.0;
  int per_octave = 8;
};

struct DecompositionVerdict {
  ContentReport whole;
  std::vector<ContentReport> parts;
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  double budget = 0.0;
  double rel_diff_lower = 0.0;  // (whole - sum) / sum
  double rel_diff_upper = 0.0;
  Verdict verdict = Verdict::kHolds;
};

/// Compares the content envelope of the union against the sum over the parts,
/// each evaluated on its own grid with the same cell size and radii.
/// Throws kOverlappingParts when two parts touch or overlap.
DecompositionVerdict decomposition_check(const std::vector<CompactSet>& parts, double s, const ConvexBody& body,
                                         double h, const RadiiSpec& radii,
                                         ContentKind kind = ContentKind::kMinkowski, const FieldOptions& opts = {});

}  // namespace aniso
