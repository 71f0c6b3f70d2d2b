#include "aniso/aniso_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "aniso/error.hpp"
#include "aniso/parallel.hpp"
#include "aniso/site_index.hpp"

namespace aniso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Area of {p ∈ [-1/2, 1/2]^2 : a|p_x| + b|p_y| ... } i.e. of the unit square
// below the line a p_x + b p_y = t, for a, b >= 0.
double square_fraction(double a, double b, double t) {
  if (a < b) std::swap(a, b);
  const double w = a + b;
  const double u = t + 0.5 * w;
  if (u <= 0.0) return 0.0;
  if (u >= w) return 1.0;
  if (b < 1e-12 * a) return u / a;
  if (u <= b) return u * u / (2.0 * a * b);
  if (u <= a) return (u - 0.5 * b) / a;
  const double v = w - u;
  return 1.0 - v * v / (2.0 * a * b);
}

// Volume of the unit cube below the plane n . p = t (n componentwise >= 0).
double cube_fraction(double a, double b, double c, double t) {
  double s[3] = {a, b, c};
  std::sort(s, s + 3, std::greater<>());
  if (s[2] < 1e-7 * s[0]) return square_fraction(s[0], s[1], t);
  const double w = s[0] + s[1] + s[2];
  const double u = t + 0.5 * w;
  if (u <= 0.0) return 0.0;
  if (u >= w) return 1.0;
  double acc = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    double shift = 0.0;
    int bits = 0;
    for (int i = 0; i < 3; ++i) {
      if (mask & (1 << i)) {
        shift += s[i];
        ++bits;
      }
    }
    const double x = u - shift;
    if (x > 0.0) acc += (bits % 2 ? -1.0 : 1.0) * x * x * x;
  }
  return std::clamp(acc / (6.0 * s[0] * s[1] * s[2]), 0.0, 1.0);
}

void fill_polygon_rows(const PolygonRegion& poly, const Grid& grid, std::vector<double>& values) {
  std::vector<double> xs;
  for (int j = 0; j < grid.extents[1]; ++j) {
    const double y = grid.origin.y + (j + 0.5) * grid.h;
    xs.clear();
    auto ring = [&](const Ring& r) {
      for (std::size_t i = 0, k = r.size() - 1; i < r.size(); k = i++) {
        const Vec& a = r[i];
        const Vec& b = r[k];
        if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    };
    ring(poly.outer);
    for (const auto& h : poly.holes) ring(h);
    std::sort(xs.begin(), xs.end());
    for (std::size_t p = 0; p + 1 < xs.size(); p += 2) {
      const int i0 = std::max(0, static_cast<int>(std::ceil((xs[p] - grid.origin.x) / grid.h - 0.5)));
      const int i1 = std::min(grid.extents[0] - 1, static_cast<int>(std::floor((xs[p + 1] - grid.origin.x) / grid.h - 0.5)));
      for (int i = i0; i <= i1; ++i) values[static_cast<std::size_t>(j) * grid.extents[0] + i] = 0.0;
    }
  }
}

void fill_voxels(const VoxelMask& mask, const Grid& grid, std::vector<double>& values) {
  for (int k = 0; k < grid.extents[2]; ++k)
    for (int j = 0; j < grid.extents[1]; ++j)
      for (int i = 0; i < grid.extents[0]; ++i) {
        const Vec c = grid.center(i, j, k);
        const int vi = static_cast<int>(std::floor((c.x - mask.origin.x) / mask.h));
        const int vj = static_cast<int>(std::floor((c.y - mask.origin.y) / mask.h));
        const int vk = grid.dim == 3 ? static_cast<int>(std::floor((c.z - mask.origin.z) / mask.h)) : 0;
        if (mask.at(vi, vj, vk)) values[(static_cast<std::size_t>(k) * grid.extents[1] + j) * grid.extents[0] + i] = 0.0;
      }
}

std::string describe(const CompactSet& set) {
  std::string out = set.kind();
  if (const auto* p = std::get_if<Prefractal>(&set.shape)) out += "(depth=" + std::to_string(p->depth) + ")";
  if (const auto* u = std::get_if<SetUnion>(&set.shape)) out += "(parts=" + std::to_string(u->parts.size()) + ")";
  if (const auto* p = std::get_if<PointCloud>(&set.shape)) out += "(n=" + std::to_string(p->points.size()) + ")";
  return out;
}

void validate_grid(const Grid& grid) {
  if (grid.dim != 2 && grid.dim != 3) throw Error(ErrorCode::kGridTooSmall, "grid dimension must be 2 or 3");
  if (!(grid.h > 0.0)) throw Error(ErrorCode::kGridTooSmall, "cell size must be positive");
  for (int a = 0; a < grid.dim; ++a) {
    if (grid.extents[a] < 2) throw Error(ErrorCode::kGridTooSmall, "every axis needs at least 2 cells");
  }
  if (grid.dim == 2 && grid.extents[2] != 1) throw Error(ErrorCode::kGridTooSmall, "planar grids have one z layer");
  if (grid.cell_count() > kMaxGridCells) throw Error(ErrorCode::kGridTooSmall, "grid exceeds the cell budget");
  if (grid.padding < 0.0) throw Error(ErrorCode::kGridTooSmall, "negative padding");
}

}  // namespace

Grid make_grid_with_padding(const CompactSet& set, double h, double padding) {
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "cannot grid an empty set");
  if (!(h > 0.0)) throw Error(ErrorCode::kGridTooSmall, "cell size must be positive");
  if (!(padding >= 0.0)) throw Error(ErrorCode::kGridTooSmall, "padding must be non-negative");
  const Box box = bounding_box(set);
  Grid grid;
  grid.dim = set.dim;
  grid.h = h;
  grid.padding = padding;
  grid.origin = box.lo - Vec{padding, padding, set.dim == 3 ? padding : 0.0};
  double total = 1.0;
  for (int a = 0; a < set.dim; ++a) {
    const double cells = std::max(2.0, std::ceil((box.hi[a] - box.lo[a] + 2.0 * padding) / h));
    total *= cells;
    if (total > static_cast<double>(kMaxGridCells)) {
      throw Error(ErrorCode::kGridTooSmall, "grid would need more than " + std::to_string(kMaxGridCells) +
                                                " cells; increase the cell size");
    }
    grid.extents[a] = static_cast<int>(cells);
  }
  grid.extents[2] = set.dim == 3 ? grid.extents[2] : 1;
  return grid;
}

Grid make_grid(const CompactSet& set, const ConvexBody& body, double h, double r_max) {
  if (!(r_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "r_max must be positive");
  if (!(h > 0.0)) throw Error(ErrorCode::kGridTooSmall, "cell size must be positive");
  return make_grid_with_padding(set, h, body.outradius() * (r_max + 2.0 * difference_step(h, body.inradius(), r_max)) + 2.0 * h);
}

DistanceField distance_field(const CompactSet& set, const ConvexBody& body, const Grid& grid,
                             const FieldOptions& options) {
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "distance to the empty set is undefined");
  if (set.dim != body.dim() || grid.dim != set.dim) {
    throw Error(ErrorCode::kInvalidArgument, "set, body and grid dimensions differ");
  }
  validate_grid(grid);
  const Box box = bounding_box(set);
  const double slack = 1e-9 * (1.0 + grid.padding);
  for (int a = 0; a < grid.dim; ++a) {
    const double lo = grid.origin[a];
    const double hi = grid.origin[a] + grid.extents[a] * grid.h;
    if (box.lo[a] - grid.padding < lo - slack || box.hi[a] + grid.padding > hi + slack) {
      throw Error(ErrorCode::kGridTooSmall, "grid does not contain E plus its padding");
    }
  }

  DistanceField field;
  field.grid = grid;
  field.spacing = options.spacing > 0.0 ? options.spacing : grid.h;
  field.set_volume = lebesgue_measure(set);
  field.body_volume = body.volume();
  field.inradius = body.inradius();
  field.outradius = body.outradius();
  field.set_descriptor = describe(set);
  for_each_leaf(set, [&](const Shape& leaf) {
    if (const auto* pf = std::get_if<Prefractal>(&leaf)) {
      double ratio = 0.0;
      for (const auto& m : pf->ifs.maps) ratio = std::max(ratio, m.ratio);
      field.scale_cutoff = std::max(field.scale_cutoff, 4.0 * std::pow(ratio, pf->depth));
    }
  });
  field.cap = field.max_radius() + 2.0 * std::sqrt(double(grid.dim)) * grid.h / body.inradius();

  const SiteIndex index(sample_boundary(set, field.spacing).points, grid.dim);
  field.site_count = index.size();

  // NaN marks "not interior"; interiors are stamped with 0 first.
  field.values.assign(grid.cell_count(), std::numeric_limits<double>::quiet_NaN());
  for_each_leaf(set, [&](const Shape& leaf) {
    if (const auto* poly = std::get_if<PolygonRegion>(&leaf)) fill_polygon_rows(*poly, grid, field.values);
    if (const auto* vox = std::get_if<VoxelMask>(&leaf)) fill_voxels(*vox, grid, field.values);
  });

  const std::size_t rows = static_cast<std::size_t>(grid.extents[1]) * grid.extents[2];
  const double bound = std::nextafter(field.cap, kInf);
  parallel_for(rows, resolve_threads(options.threads), [&](std::size_t row) {
    const int j = static_cast<int>(row % grid.extents[1]);
    const int k = static_cast<int>(row / grid.extents[1]);
    double* out = field.values.data() + row * grid.extents[0];
    int hint = -1;
    for (int i = 0; i < grid.extents[0]; ++i) {
      if (out[i] == 0.0) continue;
      const SiteIndex::Hit hit = index.nearest(grid.center(i, j, k), body, bound, hint);
      out[i] = hit.index >= 0 ? hit.value : kInf;
      if (hit.index >= 0) hint = hit.index;
    }
  });
  return field;
}

std::vector<double> volumes_at(const DistanceField& field, std::span<const double> radii, VolumeEstimator estimator) {
  const Grid& g = field.grid;
  std::vector<double> thresholds(radii.begin(), radii.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const std::size_t m = thresholds.size();
  std::vector<std::uint64_t> full_from(m + 1, 0);
  std::vector<double> partial(m, 0.0);

  const int nx = g.extents[0], ny = g.extents[1], nz = g.extents[2];
  const std::size_t stride_y = nx;
  const std::size_t stride_z = static_cast<std::size_t>(nx) * ny;
  auto first_at_least = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin());
  };
  auto first_above = [&](double v) {
    return static_cast<std::size_t>(std::upper_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin());
  };
  // One-sided or central derivative along an axis, skipping unusable neighbours.
  auto derivative = [&](const double* p, int idx, int extent, std::size_t stride) {
    const double d = *p;
    const bool has_lo = idx > 0 && std::isfinite(*(p - stride));
    const bool has_hi = idx + 1 < extent && std::isfinite(*(p + stride));
    if (has_lo && has_hi) return (*(p + stride) - *(p - stride)) / (2.0 * g.h);
    if (has_hi) return (*(p + stride) - d) / g.h;
    if (has_lo) return (d - *(p - stride)) / g.h;
    return 0.0;
  };

  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      const double* row = field.values.data() + k * stride_z + j * stride_y;
      for (int i = 0; i < nx; ++i) {
        const double d = row[i];
        if (!std::isfinite(d)) continue;
        if (estimator == VolumeEstimator::kCellCount || d == 0.0) {
          ++full_from[first_at_least(d)];
          continue;
        }
        const double gx = derivative(row + i, i, nx, 1);
        const double gy = derivative(row + i, j, ny, stride_y);
        const double gz = g.dim == 3 ? derivative(row + i, k, nz, stride_z) : 0.0;
        const double gn = std::sqrt(gx * gx + gy * gy + gz * gz);
        if (gn * field.outradius < 1e-3) {
          ++full_from[first_at_least(d)];
          continue;
        }
        const double gh = gn * g.h;
        const double ax = std::fabs(gx) / gn, ay = std::fabs(gy) / gn, az = std::fabs(gz) / gn;
        const double half = 0.5 * gh * (ax + ay + az);
        const std::size_t lo = first_above(d - half);
        const std::size_t hi = first_at_least(d + half);
        for (std::size_t t = lo; t < hi; ++t) {
          const double level = (thresholds[t] - d) / gh;
          partial[t] += g.dim == 3 ? cube_fraction(ax, ay, az, level) : square_fraction(ax, ay, level);
        }
        ++full_from[hi];
      }
    }
  }

  std::vector<double> by_threshold(m);
  std::uint64_t running = 0;
  for (std::size_t t = 0; t < m; ++t) {
    running += full_from[t];
    by_threshold[t] = g.cell_volume() * (static_cast<double>(running) + partial[t]);
  }
  std::vector<double> out;
  out.reserve(radii.size());
  for (const double r : radii) out.push_back(by_threshold[first_at_least(r)]);
  return out;
}

double VolumeProfile::budget_at(double r) const {
  if (radii.empty()) return 0.0;
  if (r <= radii.front()) return err_budget.front();
  if (r >= radii.back()) return err_budget.back();
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - radii.begin());
  const double w = std::log(r / radii[i - 1]) / std::log(radii[i] / radii[i - 1]);
  return err_budget[i - 1] * (1.0 - w) + err_budget[i] * w;
}

VolumeProfile volume_profile(const DistanceField& field, std::span<const double> radii, VolumeEstimator estimator) {
  if (radii.empty()) throw Error(ErrorCode::kInvalidArgument, "no radii requested");
  const double h = field.grid.h;
  const double a = field.inradius;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (i > 0 && !(r > radii[i - 1])) throw Error(ErrorCode::kInvalidArgument, "radii must be strictly increasing");
    if (r < field.min_radius() * (1.0 - 1e-12)) {
      throw Error(ErrorCode::kRadiusBelowResolution,
                  "radius " + std::to_string(r) + " is below the smallest resolvable radius " +
                      std::to_string(field.min_radius()) + " (max of 2h/a and the prefractal cutoff)");
    }
    if (r + 2.0 * difference_step(h, a, r) > field.max_radius() * (1.0 + 1e-12)) {
      throw Error(ErrorCode::kRadiusExceedsPadding,
                  "radius " + std::to_string(r) + " exceeds the grid padding limit " + std::to_string(field.max_radius()));
    }
  }

  VolumeProfile p;
  p.dim = field.grid.dim;
  p.radii.assign(radii.begin(), radii.end());
  p.h = h;
  p.inradius = a;
  p.outradius = field.outradius;
  p.body_volume = field.body_volume;
  p.set_volume = field.set_volume;
  p.site_count = field.site_count;
  p.set_descriptor = field.set_descriptor;

  std::vector<double> query{0.0};
  for (const double r : radii) {
    const double d = difference_step(h, a, r);
    p.delta.push_back(d);
    query.push_back(r);
    query.push_back(r + d);
    query.push_back(r + 2.0 * d);
  }
  const std::vector<double> vols = volumes_at(field, query, estimator);
  p.V0 = vols[0];
  const double n = p.dim;
  // Error allowances. V: a layer of c h |∂E_r| over the tube boundary, where
  // the Euclidean boundary measure is at most S / a, plus the sagitta
  // deficit spacing^2 / (8r) of sampling curves by sites. S: the second
  // difference over δ bounds the truncation of the one-sided stencil, plus
  // cell-scale noise that grows like h / (a r), the resolution of the tube.
  // Cell counts are not smooth in r, so there the stencil's amplification
  // of the V error is charged instead.
  const double layer = estimator == VolumeEstimator::kCellCount ? 0.5 * std::sqrt(n) : 0.05;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const double d = p.delta[i];
    const double v0 = vols[1 + 3 * i], v1 = vols[2 + 3 * i], v2 = vols[3 + 3 * i];
    const double s = (4.0 * v1 - 3.0 * v0 - v2) / (2.0 * d);
    p.V.push_back(v0);
    p.S.push_back(s);
    p.kappa.push_back(s / std::pow(r, n - 1.0));
    const double boundary = s / a;
    p.err_budget.push_back(layer * h * boundary + field.spacing * field.spacing / (8.0 * r) * boundary);
    const double noise = estimator == VolumeEstimator::kCellCount ? 4.0 * p.err_budget.back() / d
                                                                   : (0.003 + 0.6 * h / (a * r)) * std::fabs(s);
    p.S_budget.push_back(std::fabs(v2 - 2.0 * v1 + v0) / d + noise);
  }
  return p;
}

std::vector<double> geometric_radii(double r_min, double r_max, int per_octave) {
  if (!(r_min > 0.0) || !(r_max >= r_min) || per_octave < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < r_min <= r_max and per_octave >= 1");
  }
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double r = r_max * std::exp2(-static_cast<double>(k) / per_octave);
    if (r < r_min * (1.0 - 1e-12)) break;
    out.push_back(r);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void write_field_binary(const std::string& path, const DistanceField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path);
  const char magic[8] = {'A', 'N', 'I', 'S', 'O', 'F', 'L', 'D'};
  os.write(magic, 8);
  const std::uint32_t version = 1, dim = static_cast<std::uint32_t>(field.grid.dim);
  os.write(reinterpret_cast<const char*>(&version), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  for (int a = 0; a < 3; ++a) {
    const double o = field.grid.origin[a];
    os.write(reinterpret_cast<const char*>(&o), 8);
  }
  os.write(reinterpret_cast<const char*>(&field.grid.h), 8);
  for (int a = 0; a < 3; ++a) {
    const std::int32_t e = field.grid.extents[a];
    os.write(reinterpret_cast<const char*>(&e), 4);
  }
  os.write(reinterpret_cast<const char*>(&field.cap), 8);
  os.write(reinterpret_cast<const char*>(field.values.data()), static_cast<std::streamsize>(field.values.size() * 8));
  if (!os) throw Error(ErrorCode::kIo, "write failed for " + path);
}

DistanceField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (std::memcmp(magic, "ANISOFLD", 8) != 0) throw Error(ErrorCode::kIo, path + " is not a field dump");
  std::uint32_t version = 0, dim = 0;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  DistanceField field;
  field.grid.dim = static_cast<int>(dim);
  for (int a = 0; a < 3; ++a) is.read(reinterpret_cast<char*>(&field.grid.origin[a]), 8);
  is.read(reinterpret_cast<char*>(&field.grid.h), 8);
  for (int a = 0; a < 3; ++a) {
    std::int32_t e = 0;
    is.read(reinterpret_cast<char*>(&e), 4);
    field.grid.extents[a] = e;
  }
  is.read(reinterpret_cast<char*>(&field.cap), 8);
  field.values.resize(field.grid.cell_count());
  is.read(reinterpret_cast<char*>(field.values.data()), static_cast<std::streamsize>(field.values.size() * 8));
  if (!is || version != 1) throw Error(ErrorCode::kIo, "truncated or unsupported field dump " + path);
  return field;
}

}  // namespace aniso
