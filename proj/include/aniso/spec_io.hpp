#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/aniso_field.hpp"
#include "aniso/compact_set.hpp"
#include "aniso/contents.hpp"
#include "aniso/convex_body.hpp"

namespace aniso {

/// Body presets: "disk64" (any "diskK"), "square", "triangle", "cube",
/// "octahedron"; otherwise JSON {"dimension": 2, "vertices": [[x, y], ...]}
/// given inline or as "@path".
ConvexBody parse_body(const std::string& spec);
ConvexBody body_from_json(const nlohmann::json& j);

/// Set presets: "gasket:N", "point", "points:K" (K points spaced 1 apart on
/// the x-axis), "random-points:K[:SEED]", "segment", "triangle",
/// "triangle-boundary", "square", "cantor:N", "body" (E = C); otherwise
/// JSON {"kind": "gasket" | "points" | "segments" | "polygon" | "voxels" |
/// "union", ...} with an optional "offset", inline or as "@path".
CompactSet parse_set(const std::string& spec, const ConvexBody& body);
CompactSet set_from_json(const nlohmann::json& j, const ConvexBody& body);

/// The prefractal depth when the set is a single prefractal, else -1.
int prefractal_depth(const CompactSet& set);

/// Everything a CLI run depends on.
struct JobConfig {
  std::string command = "profile";
  std::string body = "disk64";
  std::string set = "point";
  double grid_h = 0.0;      // 0: derived from r_min
  double pad = 0.0;         // 0: derived from r_max
  double r_min = 0.0;       // 0: derived from r_max and the resolution guard
  double r_max = 0.25;
  int per_octave = 8;
  std::vector<double> s;    // empty: command default
  std::string kind = "minkowski";
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string normalize = "none";
  std::string estimator = "coverage";
  std::string method = "grid";
  std::size_t trials = 10000;
  double corrupt_step = 0.0;

  bool operator==(const JobConfig&) const = default;
};

nlohmann::json to_json(const JobConfig& c);
/// Throws kConfig on unknown keys or wrong types.
JobConfig job_config_from_json(const nlohmann::json& j);

VolumeEstimator parse_estimator(const std::string& text);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

/// RFC 4180 with CRLF line ends and 17 significant digits.
std::string format_number(double x);
std::string profile_csv(const VolumeProfile& p);

nlohmann::json to_json(const ContentReport& r);
nlohmann::json to_json(const DimensionReport& d);
nlohmann::json to_json(const LedgerEntry& e);
nlohmann::json to_json(const KneserVerdict& k);
nlohmann::json to_json(const GasketLimits& L);
/// Non-finite numbers become the strings "inf", "-inf", "nan".
nlohmann::json number(double x);

}  // namespace aniso
