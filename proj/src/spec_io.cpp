#include "aniso/spec_io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "aniso/error.hpp"
#include "aniso/rng.hpp"

namespace aniso {
namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json parse_json_spec(const std::string& spec) {
  const std::string text = !spec.empty() && spec[0] == '@' ? read_text(spec.substr(1)) : spec;
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, "'" + spec + "' is neither a preset nor valid JSON: " + e.what());
  }
}

Vec to_vec(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw Error(ErrorCode::kConfig, "expected a " + std::to_string(dim) + "-vector, got " + j.dump());
  }
  Vec v;
  for (int i = 0; i < dim; ++i) v[i] = j[i].get<double>();
  return v;
}

std::vector<Vec> to_vecs(const json& j, int dim) {
  if (!j.is_array()) throw Error(ErrorCode::kConfig, "expected a list of vectors");
  std::vector<Vec> out;
  for (const auto& e : j) out.push_back(to_vec(e, dim));
  return out;
}

// "name:N" -> N, or `fallback` for a bare "name".
bool preset_arg(const std::string& spec, const std::string& name, long& value, long fallback) {
  if (spec == name) {
    value = fallback;
    return true;
  }
  if (spec.rfind(name + ":", 0) != 0) return false;
  const std::string arg = spec.substr(name.size() + 1);
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc() || ptr != arg.data() + arg.size()) {
    throw Error(ErrorCode::kConfig, "bad integer in preset '" + spec + "'");
  }
  return true;
}

CompactSet body_as_set(const ConvexBody& body) {
  if (body.dim() != 2) throw Error(ErrorCode::kConfig, "the 'body' set preset needs a planar body");
  Ring ring(body.vertices().begin(), body.vertices().end());
  return make_polygon(std::move(ring));
}

CompactSet random_points(long count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::kConfig, "random-points needs a positive count");
  Rng rng(seed);
  std::vector<Vec> pts;
  for (long i = 0; i < count; ++i) {
    const double x = rng.uniform();
    pts.push_back({x, rng.uniform(), 0.0});
  }
  return make_points(std::move(pts));
}

template <class T>
void get_to(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ConvexBody body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices")) throw Error(ErrorCode::kConfig, "body JSON needs \"vertices\"");
  const int dim = j.value("dimension", 2);
  const std::vector<Vec> v = to_vecs(j.at("vertices"), dim);
  return make_body(dim, v);
}

ConvexBody parse_body(const std::string& spec) {
  if (spec == "square") {
    const std::vector<Vec> v{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}};
    return make_body(2, v);
  }
  if (spec == "triangle") {
    const double r3 = std::sqrt(3.0);
    const std::vector<Vec> v{{2, 0, 0}, {-1, r3, 0}, {-1, -r3, 0}};
    return make_body(2, v);
  }
  if (spec == "cube") {
    std::vector<Vec> v;
    for (int m = 0; m < 8; ++m) v.push_back({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0});
    return make_body(3, v);
  }
  if (spec == "octahedron") {
    const std::vector<Vec> v{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    return make_body(3, v);
  }
  if (spec.rfind("disk", 0) == 0 && spec.size() > 4 && spec[4] != ':') {
    int k = 0;
    const auto [ptr, ec] = std::from_chars(spec.data() + 4, spec.data() + spec.size(), k);
    if (ec == std::errc() && ptr == spec.data() + spec.size()) {
      if (k < 3) throw Error(ErrorCode::kConfig, "a disk polygon needs at least 3 vertices");
      return regular_polygon(k);
    }
  }
  return body_from_json(parse_json_spec(spec));
}

CompactSet set_from_json(const json& j, const ConvexBody& body) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::kConfig, "set JSON needs \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.value("dimension", body.dim());
  CompactSet set;
  if (kind == "gasket") {
    set = sierpinski_gasket(j.value("depth", 0));
  } else if (kind == "points") {
    set = make_points(to_vecs(j.at("points"), dim), dim);
  } else if (kind == "segments") {
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) {
      if (!s.is_array() || s.size() != 2) throw Error(ErrorCode::kConfig, "a segment is a pair of points");
      segs.push_back({to_vec(s[0], dim), to_vec(s[1], dim)});
    }
    set = make_segments(std::move(segs), dim);
  } else if (kind == "polygon") {
    std::vector<Ring> holes;
    if (j.contains("holes")) {
      for (const auto& h : j.at("holes")) holes.push_back(to_vecs(h, 2));
    }
    set = make_polygon(to_vecs(j.at("outer"), 2), std::move(holes));
  } else if (kind == "voxels") {
    VoxelMask m;
    m.origin = to_vec(j.at("origin"), dim);
    m.h = j.at("h").get<double>();
    if (!(m.h > 0.0)) throw Error(ErrorCode::kInvalidSet, "voxel size must be positive");
    const auto ext = j.at("extents").get<std::vector<int>>();
    if (static_cast<int>(ext.size()) != dim) throw Error(ErrorCode::kConfig, "voxel extents must match the dimension");
    for (int a = 0; a < dim; ++a) m.extents[a] = ext[a];
    m.occupied = j.at("occupied").get<std::vector<std::uint8_t>>();
    if (m.occupied.size() != static_cast<std::size_t>(m.extents[0]) * m.extents[1] * m.extents[2]) {
      throw Error(ErrorCode::kConfig, "voxel occupancy size does not match the extents");
    }
    set = {dim, std::move(m)};
  } else if (kind == "union") {
    std::vector<CompactSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(p.is_string() ? parse_set(p.get<std::string>(), body) : set_from_json(p, body));
    set = make_union(std::move(parts));
  } else {
    throw Error(ErrorCode::kConfig, "unknown set kind '" + kind + "'");
  }
  if (j.contains("offset")) set = translate(set, to_vec(j.at("offset"), set.dim));
  return set;
}

CompactSet parse_set(const std::string& spec, const ConvexBody& body) {
  long v = 0;
  if (preset_arg(spec, "gasket", v, 10)) return sierpinski_gasket(static_cast<int>(v));
  if (preset_arg(spec, "cantor", v, 3)) {
    if (v < 0 || v > 12) throw Error(ErrorCode::kDepthTooLarge, "cantor depth must lie in [0, 12]");
    return ifs_apply(cantor_dust_ifs(), make_points({{0, 0, 0}}), static_cast<int>(v));
  }
  if (spec == "point") return make_points({{0, 0, 0}}, body.dim());
  if (preset_arg(spec, "points", v, 2)) {
    if (v < 1) throw Error(ErrorCode::kConfig, "points needs a positive count");
    std::vector<Vec> pts;
    for (long i = 0; i < v; ++i) pts.push_back({static_cast<double>(i), 0.0, 0.0});
    return make_points(std::move(pts), body.dim());
  }
  if (spec.rfind("random-points", 0) == 0) {
    const std::string rest = spec.substr(13);
    long count = 20, seed = 1;
    if (!rest.empty()) {
      if (rest[0] != ':') throw Error(ErrorCode::kConfig, "bad preset '" + spec + "'");
      const auto colon = rest.find(':', 1);
      const std::string c = rest.substr(1, colon == std::string::npos ? std::string::npos : colon - 1);
      if (std::from_chars(c.data(), c.data() + c.size(), count).ec != std::errc()) throw Error(ErrorCode::kConfig, "bad count in '" + spec + "'");
      if (colon != std::string::npos) {
        const std::string s = rest.substr(colon + 1);
        if (std::from_chars(s.data(), s.data() + s.size(), seed).ec != std::errc()) throw Error(ErrorCode::kConfig, "bad seed in '" + spec + "'");
      }
    }
    return random_points(count, static_cast<std::uint64_t>(seed));
  }
  if (spec == "segment") return make_segments({{{0, 0, 0}, {1, 0, 0}}});
  if (spec == "triangle") return unit_triangle();
  if (spec == "triangle-boundary") return unit_triangle_boundary();
  if (spec == "square") return make_polygon({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  if (spec == "body") return body_as_set(body);
  return set_from_json(parse_json_spec(spec), body);
}

int prefractal_depth(const CompactSet& set) {
  const auto* pf = std::get_if<Prefractal>(&set.shape);
  return pf ? pf->depth : -1;
}

json to_json(const JobConfig& c) {
  return json{{"command", c.command},       {"body", c.body},       {"set", c.set},
              {"grid_h", c.grid_h},         {"pad", c.pad},         {"r_min", c.r_min},
              {"r_max", c.r_max},           {"per_octave", c.per_octave}, {"s", c.s},
              {"kind", c.kind},             {"out", c.out},         {"seed", c.seed},
              {"threads", c.threads},       {"normalize", c.normalize}, {"estimator", c.estimator},
              {"method", c.method},         {"trials", c.trials},   {"corrupt_step", c.corrupt_step}};
}

JobConfig job_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  const JobConfig defaults;
  const json known = to_json(defaults);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
  JobConfig c;
  get_to(j, "command", c.command);
  get_to(j, "body", c.body);
  get_to(j, "set", c.set);
  get_to(j, "grid_h", c.grid_h);
  get_to(j, "pad", c.pad);
  get_to(j, "r_min", c.r_min);
  get_to(j, "r_max", c.r_max);
  get_to(j, "per_octave", c.per_octave);
  get_to(j, "s", c.s);
  get_to(j, "kind", c.kind);
  get_to(j, "out", c.out);
  get_to(j, "seed", c.seed);
  get_to(j, "threads", c.threads);
  get_to(j, "normalize", c.normalize);
  get_to(j, "estimator", c.estimator);
  get_to(j, "method", c.method);
  get_to(j, "trials", c.trials);
  get_to(j, "corrupt_step", c.corrupt_step);
  return c;
}

VolumeEstimator parse_estimator(const std::string& text) {
  if (text == "coverage") return VolumeEstimator::kCoverage;
  if (text == "count") return VolumeEstimator::kCellCount;
  throw Error(ErrorCode::kConfig, "unknown estimator '" + text + "' (coverage, count)");
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    os << contents;
    os.flush();
    if (!os) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string profile_csv(const VolumeProfile& p) {
  std::string out = "r,V,S,kappa,err_budget\r\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_number(p.radii[i]) + ',' + format_number(p.V[i]) + ',' + format_number(p.S[i]) + ',' +
           format_number(p.kappa[i]) + ',' + format_number(p.err_budget[i]) + "\r\n";
  }
  return out;
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const ContentReport& r) {
  json table = json::array();
  for (const auto& row : r.octave_table) {
    table.push_back({{"r_lo", row.r_lo}, {"r_hi", row.r_hi}, {"q_min", number(row.q_min)}, {"q_max", number(row.q_max)}});
  }
  return json{{"s", r.s},
              {"n", r.n},
              {"kind", to_string(r.kind)},
              {"lower", number(r.lower)},
              {"upper", number(r.upper)},
              {"lower_budget", number(r.lower_budget)},
              {"upper_budget", number(r.upper_budget)},
              {"diverges", r.diverges},
              {"window", {r.window_lo, r.window_hi}},
              {"octave_table", table},
              {"method", r.method},
              {"normalization", to_string(r.normalization)},
              {"multiplier", r.multiplier}};
}

json to_json(const DimensionReport& d) {
  json osc = json::array();
  for (const auto& row : d.oscillation) osc.push_back({{"r_lo", row.r_lo}, {"r_hi", row.r_hi}, {"min", row.q_min}, {"max", row.q_max}});
  return json{{"dim", d.dim},
              {"dim_lower", d.dim_lower},
              {"dim_upper", d.dim_upper},
              {"regression", {{"slope", d.slope}, {"intercept", d.intercept}, {"residual", d.residual}}},
              {"window", {d.window_lo, d.window_hi}},
              {"octave_dims", d.octave_dims},
              {"oscillation", osc}};
}

json to_json(const LedgerEntry& e) {
  return json{{"name", e.name},       {"statement", e.statement},      {"lhs", number(e.lhs)},
              {"rhs", number(e.rhs)}, {"slack", number(e.slack)},      {"budget", number(e.budget)},
              {"verdict", to_string(e.verdict)}, {"equality_within_tolerance", e.equality}};
}

json to_json(const KneserVerdict& k) {
  json v = json::array();
  for (const auto& x : k.violations) {
    v.push_back({{"a", x.a}, {"b", x.b}, {"t", x.t}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"tol", x.tol}});
  }
  return json{{"trials", k.trials},
              {"violation_count", k.violation_count},
              {"worst_excess", number(k.worst_excess)},
              {"violations", v},
              {"verdict", k.ok() ? "holds" : "violated"}};
}

json to_json(const GasketLimits& L) {
  return json{{"D", L.D},
              {"u2", L.u2},
              {"S_lower", L.S_lower},
              {"M_lower", L.M_lower},
              {"M_upper", L.M_upper},
              {"S_upper", L.S_upper},
              {"coefficients",
               {{"S_lower", L.S_lower_coef},
                {"M_lower", L.M_lower_coef},
                {"M_upper", L.M_upper_coef},
                {"S_upper", L.S_upper_coef},
                {"S_lower_short_form", L.S_lower_short_form_coef}}},
              {"alpha_max", L.alpha_max},
              {"beta_max", L.beta_max},
              {"beta_min", L.beta_min},
              {"strict_chain", L.S_lower < L.M_lower && L.M_lower < L.M_upper && L.M_upper < L.S_upper}};
}

}  // namespace aniso
