#include "aniso/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "aniso/closed_form.hpp"
#include "aniso/error.hpp"

namespace aniso {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.3.0";

void check(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kConfig, message);
}

void validate(const JobConfig& c) {
  check(c.command == "profile" || c.command == "content" || c.command == "verify" || c.command == "gasket-exact",
        "unknown command '" + c.command + "'");
  check(std::isfinite(c.r_max) && c.r_max > 0.0, "--rmax must be positive");
  check(c.r_min >= 0.0 && c.r_min < c.r_max, "--rmin must lie in [0, rmax)");
  check(c.grid_h >= 0.0 && std::isfinite(c.grid_h), "--grid-h must be non-negative");
  check(c.pad >= 0.0 && std::isfinite(c.pad), "--pad must be non-negative");
  check(c.per_octave >= 1 && c.per_octave <= 1024, "--per-octave must lie in [1, 1024]");
  check(c.threads >= 0, "--threads must be non-negative");
  check(c.method == "grid" || c.method == "closed-form", "--method must be grid or closed-form");
  check(c.kind == "all" || c.kind == "minkowski" || c.kind == "outer" || c.kind == "s-content",
        "--kind must be minkowski, outer, s-content or all");
  check(c.corrupt_step >= 0.0 && std::isfinite(c.corrupt_step), "--corrupt-step must be non-negative");
  parse_normalization(c.normalize);
  parse_estimator(c.estimator);
  for (double s : c.s) check(std::isfinite(s) && s >= 0.0, "--s values must be finite and non-negative");
}

bool is_unit_gasket(const CompactSet& set) {
  const auto* pf = std::get_if<Prefractal>(&set.shape);
  return pf && pf->ifs == gasket_ifs();
}

// Dimension the set's leaves are expected to have: 0 for points, 1 for
// segments, n-1 for regions (their outer contents), the similarity dimension
// for prefractals.
double natural_dimension(const CompactSet& set) {
  double d = 0.0;
  for_each_leaf(set, [&](const Shape& leaf) {
    if (std::holds_alternative<SegmentSet>(leaf)) d = std::max(d, 1.0);
    if (std::holds_alternative<PolygonRegion>(leaf) || std::holds_alternative<VoxelMask>(leaf)) {
      d = std::max(d, set.dim - 1.0);
    }
    if (const auto* pf = std::get_if<Prefractal>(&leaf)) {
      d = std::max(d, std::log(double(pf->ifs.maps.size())) / -std::log(pf->ifs.maps.front().ratio));
    }
  });
  return d;
}

double prefractal_cutoff(const CompactSet& set) {
  double cutoff = 0.0;
  for_each_leaf(set, [&](const Shape& leaf) {
    if (const auto* pf = std::get_if<Prefractal>(&leaf)) {
      double ratio = 0.0;
      for (const auto& m : pf->ifs.maps) ratio = std::max(ratio, m.ratio);
      cutoff = std::max(cutoff, 4.0 * std::pow(ratio, pf->depth));
    }
  });
  return cutoff;
}

struct Plan {
  double r_min = 0.0;
  double h = 0.0;
  double padding = 0.0;
  std::vector<double> radii;
};

Plan plan_radii(const JobConfig& c, const ConvexBody& body, const CompactSet* set) {
  Plan p;
  p.r_min = c.r_min > 0.0 ? c.r_min : std::max(c.r_max / 64.0, set ? prefractal_cutoff(*set) : 0.0);
  check(p.r_min < c.r_max, "derived rmin " + format_number(p.r_min) + " is not below rmax; pass a larger --rmax");
  p.h = c.grid_h > 0.0 ? c.grid_h : p.r_min * body.inradius() / 4.0;
  p.radii = geometric_radii(p.r_min, c.r_max, c.per_octave);
  return p;
}

struct GridRun {
  DistanceField field;
  VolumeProfile profile;
};

GridRun run_grid(const JobConfig& c, const ConvexBody& body, const CompactSet& set, Plan& plan) {
  const Grid grid = c.pad > 0.0 ? make_grid_with_padding(set, plan.h, c.pad) : make_grid(set, body, plan.h, c.r_max);
  plan.padding = grid.padding;
  GridRun run{distance_field(set, body, grid, {0.0, c.threads}), {}};
  run.profile = volume_profile(run.field, plan.radii, parse_estimator(c.estimator));
  return run;
}

json resolved_json(const Plan& p) {
  return json{{"r_min", p.r_min}, {"grid_h", p.h}, {"padding", p.padding}, {"radii", p.radii.size()}};
}

json profile_summary(const VolumeProfile& p, const DistanceField* field) {
  json j{{"method", p.method},           {"set", p.set_descriptor}, {"V0", p.V0},
         {"set_volume", p.set_volume},   {"body_volume", p.body_volume}, {"inradius", p.inradius},
         {"outradius", p.outradius},     {"h", p.h},                {"site_count", p.site_count}};
  if (field) {
    j["grid"] = {{"origin", {field->grid.origin[0], field->grid.origin[1], field->grid.origin[2]}},
                 {"extents", field->grid.extents},
                 {"padding", field->grid.padding},
                 {"cells", field->grid.cell_count()}};
    j["min_radius"] = field->min_radius();
    j["scale_cutoff"] = field->scale_cutoff;
  }
  return j;
}

json envelope(const JobConfig& c) {
  return json{{"tool", "aniso"}, {"version", kVersion}, {"config", to_json(c)}};
}

std::string out_path(const JobConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

void write_json(const JobConfig& c, const std::string& name, const json& j) {
  write_file_atomic(out_path(c, name), j.dump(2) + "\n");
}

std::vector<ContentKind> kinds_of(const JobConfig& c) {
  if (c.kind == "all") return {ContentKind::kMinkowski, ContentKind::kOuterMinkowski, ContentKind::kSContent};
  return {parse_content_kind(c.kind)};
}

std::vector<double> s_values(const JobConfig& c, double natural, int n) {
  std::vector<double> s = c.s.empty() ? std::vector<double>{natural} : c.s;
  for (double v : s) check(v <= n, "s = " + format_number(v) + " exceeds the dimension " + std::to_string(n));
  return s;
}

// A report builder for (s, kind, normalization); grid or closed form.
using ReportFn = std::function<ContentReport(double, ContentKind, Normalization)>;

std::vector<LedgerEntry> ledger_at(const ReportFn& report, int n, double s, double body_volume, double set_volume) {
  LedgerInput in;
  in.n = n;
  in.s = s;
  in.body_volume = body_volume;
  in.set_volume = set_volume;
  in.M = report(s, ContentKind::kMinkowski, Normalization::kNone);
  in.SM = report(s, ContentKind::kOuterMinkowski, Normalization::kNone);
  in.S = report(s, ContentKind::kSContent, Normalization::kNone);
  in.S_t = report(s * (n - 1.0) / n, ContentKind::kSContent, Normalization::kNone);
  in.S_n1 = report(n - 1.0, ContentKind::kSContent, Normalization::kNone);
  return inequality_ledger(in);
}

json ledger_json(double s, const std::vector<LedgerEntry>& entries) {
  json list = json::array();
  for (const auto& e : entries) list.push_back(to_json(e));
  return json{{"s", s}, {"entries", list}, {"verdict", to_string(overall(entries))}};
}

// Everything content and verify need, for either method.
struct Analysis {
  int n = 2;
  double natural = 0.0;
  double body_volume = 0.0;
  double set_volume = 0.0;
  ReportFn report;
  VolumeProfile profile;
  VolumeFunction V;
  KneserTolerance tolerance;
  std::optional<GasketLimits> limits;
  json dimension;
  json meta;
};

Analysis analyse(const JobConfig& c) {
  const ConvexBody body = parse_body(c.body);
  Analysis a;
  a.n = body.dim();
  a.body_volume = body.volume();
  if (c.method == "closed-form") {
    const CompactSet set = parse_set(c.set, body);
    check(is_unit_gasket(set), "--method closed-form is only available for gasket sets");
    Plan plan = plan_radii(c, body, nullptr);
    const GasketProfile g = gasket_profile(body);
    a.natural = g.D;
    a.limits = gasket_content_limits(g);
    a.report = [g](double s, ContentKind k, Normalization norm) { return gasket_content_report(g, s, k, norm); };
    a.profile = gasket_closed_form_profile(g, plan.radii);
    auto scalar = [g](double r) { return gasket_eval(g, r).V; };
    a.V = [scalar](std::span<const double> rs) {
      std::vector<double> v;
      for (double r : rs) v.push_back(scalar(r));
      return v;
    };
    a.tolerance = closed_form_tolerance(a.n, scalar);
    a.dimension = json{{"dim", g.D}, {"method", "closed_form"}};
    a.meta = json{{"resolved", resolved_json(plan)}, {"profile", profile_summary(a.profile, nullptr)}};
    return a;
  }
  const CompactSet set = parse_set(c.set, body);
  Plan plan = plan_radii(c, body, &set);
  auto run = std::make_shared<GridRun>(run_grid(c, body, set, plan));
  a.natural = natural_dimension(set);
  a.set_volume = run->profile.set_volume;
  a.profile = run->profile;
  a.report = [run](double s, ContentKind k, Normalization norm) { return content_estimate(run->profile, s, k, norm); };
  const VolumeEstimator est = parse_estimator(c.estimator);
  a.V = [run, est](std::span<const double> rs) { return volumes_at(run->field, rs, est); };
  a.tolerance = grid_tolerance(run->profile);
  try {
    a.dimension = to_json(dimension_estimate(run->profile));
  } catch (const Error& e) {
    a.dimension = json{{"error", e.what()}};
  }
  a.meta = json{{"resolved", resolved_json(plan)}, {"profile", profile_summary(run->profile, &run->field)}};
  return a;
}

int cmd_profile(const JobConfig& c) {
  const ConvexBody body = parse_body(c.body);
  const CompactSet set = parse_set(c.set, body);
  json meta = envelope(c);
  VolumeProfile profile;
  if (c.method == "closed-form") {
    check(is_unit_gasket(set), "--method closed-form is only available for gasket sets");
    Plan plan = plan_radii(c, body, nullptr);
    profile = gasket_closed_form_profile(gasket_profile(body), plan.radii);
    meta["resolved"] = resolved_json(plan);
    meta["profile"] = profile_summary(profile, nullptr);
  } else {
    Plan plan = plan_radii(c, body, &set);
    const GridRun run = run_grid(c, body, set, plan);
    profile = run.profile;
    meta["resolved"] = resolved_json(plan);
    meta["profile"] = profile_summary(profile, &run.field);
  }
  meta["octaves"] = std::log2(profile.radii.back() / profile.radii.front());
  write_file_atomic(out_path(c, "profile.csv"), profile_csv(profile));
  write_json(c, "profile.json", meta);
  return kExitHolds;
}

int cmd_content(const JobConfig& c) {
  const Analysis a = analyse(c);
  const Normalization norm = parse_normalization(c.normalize);
  json reports = json::array();
  json ledgers = json::array();
  Verdict worst = Verdict::kHolds;
  for (double s : s_values(c, a.natural, a.n)) {
    json row{{"s", s}};
    for (ContentKind k : kinds_of(c)) {
      if (k == ContentKind::kSContent && s >= a.n) continue;
      row[to_string(k)] = to_json(a.report(s, k, norm));
    }
    reports.push_back(row);
    if (s < a.n) {
      const auto entries = ledger_at(a.report, a.n, s, a.body_volume, a.set_volume);
      worst = std::max(worst, overall(entries));
      ledgers.push_back(ledger_json(s, entries));
    }
  }
  json out = envelope(c);
  out.update(a.meta);
  out["dimension"] = a.dimension;
  out["reports"] = reports;
  out["ledger"] = ledgers;
  out["verdict"] = to_string(worst);
  if (a.limits) out["gasket_limits"] = to_json(*a.limits);
  write_json(c, "content.json", out);
  return exit_code(worst);
}

int cmd_verify(const JobConfig& c) {
  const Analysis a = analyse(c);
  Verdict worst = Verdict::kHolds;
  json ledgers = json::array();
  for (double s : s_values(c, a.natural, a.n)) {
    if (s >= a.n) continue;
    const auto entries = ledger_at(a.report, a.n, s, a.body_volume, a.set_volume);
    worst = std::max(worst, overall(entries));
    ledgers.push_back(ledger_json(s, entries));
  }

  const double r_lo = a.profile.radii.front();
  const double r_hi = a.profile.radii.back();
  VolumeFunction V = a.V;
  if (c.corrupt_step > 0.0) {
    const double r_star = std::sqrt(r_lo * r_hi);
    const double jump = c.corrupt_step * a.V(std::vector<double>{r_star}).front();
    V = [base = a.V, r_star, jump](std::span<const double> rs) {
      std::vector<double> v = base(rs);
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i] >= r_star) v[i] += jump;
      }
      return v;
    };
  }
  const KneserVerdict kneser = kneser_check(V, a.n, r_lo, r_hi, c.trials, c.seed, a.tolerance);
  if (!kneser.ok()) worst = Verdict::kViolated;

  const LedgerEntry kappa = kappa_monotonicity(a.profile);
  worst = std::max(worst, kappa.verdict);

  json out = envelope(c);
  out.update(a.meta);
  out["ledger"] = ledgers;
  out["kneser"] = to_json(kneser);
  out["kappa_monotone"] = to_json(kappa);
  if (a.limits) {
    out["gasket_limits"] = to_json(*a.limits);
    out["strict_chain"] = a.limits->S_lower < a.limits->M_lower && a.limits->M_lower < a.limits->M_upper &&
                          a.limits->M_upper < a.limits->S_upper;
  }
  out["verdict"] = to_string(worst);
  write_json(c, "verify.json", out);
  return exit_code(worst);
}

int cmd_gasket_exact(const JobConfig& c) {
  const ConvexBody body = parse_body(c.body);
  check(body.dim() == 2, "the gasket closed forms need a planar body");
  const GasketProfile g = gasket_profile(body);
  const GasketLimits limits = gasket_content_limits(g);
  const double r_min = c.r_min > 0.0 ? c.r_min : c.r_max / 1024.0;
  const std::vector<double> radii = geometric_radii(r_min, c.r_max, c.per_octave);

  std::string csv = "r,V_exact,S_exact\r\n";
  for (double r : radii) {
    const GasketValue v = gasket_eval(g, r);
    csv += format_number(r) + ',' + format_number(v.V) + ',' + format_number(v.S) + "\r\n";
  }
  json out = envelope(c);
  out["limits"] = to_json(limits);
  out["body_volume"] = g.body_volume;
  out["b"] = g.b;
  out["c"] = g.c;
  const Normalization norm = parse_normalization(c.normalize);
  if (norm != Normalization::kNone) {
    const double m = 1.0 / omega(2.0 - g.D, norm);
    out["normalized"] = {{"normalization", to_string(norm)},
                         {"multiplier", m},
                         {"S_lower", m * limits.S_lower},
                         {"M_lower", m * limits.M_lower},
                         {"M_upper", m * limits.M_upper},
                         {"S_upper", m * limits.S_upper}};
  }
  write_file_atomic(out_path(c, "gasket.csv"), csv);
  write_json(c, "gasket.json", out);
  return kExitHolds;
}

JobConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot read " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
  return job_config_from_json(j.contains("config") ? j.at("config") : j);
}

// One flag bound to a JobConfig field, so that explicitly passed flags can
// override a --config file.
struct Binding {
  CLI::Option* option;
  std::function<void(JobConfig&, const JobConfig&)> copy;
};

template <class T>
void bind_flag(CLI::App* app, std::vector<Binding>& out, JobConfig& cfg, const std::string& name, T JobConfig::*field,
          const std::string& help) {
  CLI::Option* opt = app->add_option(name, cfg.*field, help)->capture_default_str();
  out.push_back({opt, [field](JobConfig& dst, const JobConfig& src) { dst.*field = src.*field; }});
}

}  // namespace

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return kExitHolds;
    case Verdict::kViolated: return kExitViolated;
    case Verdict::kInconclusive: return kExitInconclusive;
  }
  return kExitFailure;
}

int run_job(const JobConfig& cfg) {
  validate(cfg);
  if (cfg.command == "profile") return cmd_profile(cfg);
  if (cfg.command == "content") return cmd_content(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  return cmd_gasket_exact(cfg);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Anisotropic tube volumes, contents and inequality checks", "aniso"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  JobConfig cfg;
  std::string config_path;
  std::vector<std::pair<CLI::App*, std::vector<Binding>>> subs;
  for (const char* name : {"profile", "content", "verify", "gasket-exact"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("Run the ") + name + " pipeline");
    std::vector<Binding> b;
    bind_flag(sub, b, cfg, "--set", &JobConfig::set, "Set preset or JSON (inline or @file)");
    bind_flag(sub, b, cfg, "--body", &JobConfig::body, "Body preset or JSON (inline or @file)");
    bind_flag(sub, b, cfg, "--grid-h", &JobConfig::grid_h, "Cell size; 0 derives it from rmin");
    bind_flag(sub, b, cfg, "--pad", &JobConfig::pad, "Grid padding; 0 derives it from rmax");
    bind_flag(sub, b, cfg, "--rmin", &JobConfig::r_min, "Smallest radius; 0 picks rmax/64");
    bind_flag(sub, b, cfg, "--rmax", &JobConfig::r_max, "Largest radius");
    bind_flag(sub, b, cfg, "--per-octave", &JobConfig::per_octave, "Radii per factor of two");
    bind_flag(sub, b, cfg, "--s", &JobConfig::s, "Content exponents, comma separated");
    b.back().option->delimiter(',');
    bind_flag(sub, b, cfg, "--kind", &JobConfig::kind, "minkowski, outer, s-content or all");
    bind_flag(sub, b, cfg, "--out", &JobConfig::out, "Output directory");
    bind_flag(sub, b, cfg, "--seed", &JobConfig::seed, "Seed for all sampling");
    bind_flag(sub, b, cfg, "--threads", &JobConfig::threads, "Worker threads; 0 uses ANISO_THREADS or all cores");
    bind_flag(sub, b, cfg, "--normalize", &JobConfig::normalize, "none, omega or omega-printed");
    bind_flag(sub, b, cfg, "--estimator", &JobConfig::estimator, "coverage or count");
    bind_flag(sub, b, cfg, "--method", &JobConfig::method, "grid or closed-form");
    bind_flag(sub, b, cfg, "--trials", &JobConfig::trials, "Kneser samples");
    bind_flag(sub, b, cfg, "--corrupt-step", &JobConfig::corrupt_step, "Inject a jump into V (negative control)");
    sub->add_option("--config", config_path, "JobConfig JSON, or a metadata file holding one; flags override it");
    subs.emplace_back(sub, std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitHolds : kExitUsage;
  }

  try {
    for (auto& [sub, bindings] : subs) {
      if (!sub->parsed()) continue;
      if (!config_path.empty()) {
        const JobConfig base = load_config(config_path);
        for (const auto& b : bindings) {
          if (b.option->count() == 0) b.copy(cfg, base);
        }
      }
      cfg.command = sub->get_name();
    }
    return run_job(cfg);
  } catch (const Error& e) {
    std::cerr << "aniso: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kExitFailure : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "aniso: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace aniso
