#include "aniso/compact_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aniso/error.hpp"

namespace aniso {
namespace {

constexpr std::size_t kMaxElements = 60'000'000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double signed_area2(const Ring& r) {
  double a = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) a += cross2(r[i], r[(i + 1) % r.size()]);
  return a;
}

bool segments_cross(const Vec& p1, const Vec& p2, const Vec& q1, const Vec& q2) {
  auto orient = [](const Vec& a, const Vec& b, const Vec& c) {
    const double v = cross2(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const Vec& a, const Vec& b, const Vec& c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

void check_simple(const std::vector<const Ring*>& rings) {
  struct Edge {
    Vec a, b;
    std::size_t ring, index, ring_size;
  };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const Ring& ring = *rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i) edges.push_back({ring[i], ring[(i + 1) % ring.size()], r, i, ring.size()});
  }
  if (edges.size() > 20000) return;  // quadratic check reserved for modest inputs
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& e = edges[i];
      const Edge& f = edges[j];
      if (e.ring == f.ring) {
        const bool adjacent = (e.index + 1) % e.ring_size == f.index || (f.index + 1) % f.ring_size == e.index;
        if (adjacent) continue;
      }
      if (segments_cross(e.a, e.b, f.a, f.b)) {
        throw Error(ErrorCode::kSelfIntersecting, "polygon rings intersect");
      }
    }
  }
}

std::vector<Vec> dedupe(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void sample_segment(const Vec& a, const Vec& b, double spacing, std::vector<Vec>& out) {
  const double len = norm(b - a);
  const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-9)));
  for (std::size_t i = 0; i <= m; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / m));
}

void check_count(std::size_t n) {
  if (n > kMaxElements) throw Error(ErrorCode::kDepthTooLarge, "IFS expansion exceeds the element budget");
}

}  // namespace

bool VoxelMask::at(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i >= extents[0] || j >= extents[1] || k >= extents[2]) return false;
  return occupied[(static_cast<std::size_t>(k) * extents[1] + j) * extents[0] + i] != 0;
}

Vec Similarity::apply(const Vec& x) const {
  const auto& m = rotation;
  const Vec r{m[0] * x.x + m[1] * x.y + m[2] * x.z, m[3] * x.x + m[4] * x.y + m[5] * x.z,
              m[6] * x.x + m[7] * x.y + m[8] * x.z};
  return r * ratio + translation;
}

bool CompactSet::empty() const {
  return std::visit(Overloaded{
                        [](const PointCloud& p) { return p.points.empty(); },
                        [](const SegmentSet& s) { return s.segments.empty(); },
                        [](const PolygonRegion& p) { return p.outer.empty(); },
                        [](const VoxelMask& v) { return std::none_of(v.occupied.begin(), v.occupied.end(), [](auto b) { return b != 0; }); },
                        [](const Prefractal& p) {
                          return std::visit(Overloaded{[](const PointCloud& c) { return c.points.empty(); },
                                                       [](const SegmentSet& s) { return s.segments.empty(); }},
                                            p.realization);
                        },
                        [](const SetUnion& u) {
                          return std::all_of(u.parts.begin(), u.parts.end(), [](const CompactSet& c) { return c.empty(); });
                        },
                    },
                    shape);
}

std::string CompactSet::kind() const {
  static constexpr const char* kNames[] = {"points", "segments", "polygon", "voxels", "prefractal", "union"};
  return kNames[shape.index()];
}

CompactSet make_points(std::vector<Vec> points, int dim) { return {dim, PointCloud{std::move(points)}}; }

CompactSet make_segments(std::vector<Segment> segments, int dim) { return {dim, SegmentSet{std::move(segments)}}; }

CompactSet make_polygon(Ring outer, std::vector<Ring> holes) {
  if (outer.size() < 3) throw Error(ErrorCode::kInvalidSet, "outer ring needs at least 3 vertices");
  if (signed_area2(outer) == 0.0) throw Error(ErrorCode::kInvalidSet, "outer ring has zero area");
  if (signed_area2(outer) < 0.0) std::reverse(outer.begin(), outer.end());
  for (auto& h : holes) {
    if (h.size() < 3) throw Error(ErrorCode::kInvalidSet, "hole ring needs at least 3 vertices");
    if (signed_area2(h) > 0.0) std::reverse(h.begin(), h.end());
  }
  std::vector<const Ring*> rings{&outer};
  for (const auto& h : holes) rings.push_back(&h);
  check_simple(rings);
  PolygonRegion outer_only{outer, {}};
  for (const auto& h : holes) {
    for (const auto& p : h) {
      if (!contains_point(outer_only, p)) throw Error(ErrorCode::kInvalidSet, "hole is not inside the outer ring");
    }
  }
  return {2, PolygonRegion{std::move(outer), std::move(holes)}};
}

CompactSet make_union(std::vector<CompactSet> parts) {
  if (parts.empty()) return make_points({});
  const int dim = parts.front().dim;
  for (const auto& p : parts) {
    if (p.dim != dim) throw Error(ErrorCode::kInvalidSet, "union parts differ in dimension");
  }
  return {dim, SetUnion{std::move(parts)}};
}

IFS gasket_ifs() {
  IFS ifs;
  ifs.maps.push_back({0.5, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0.0, 0.0, 0.0}});
  ifs.maps.push_back({0.5, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0.5, 0.0, 0.0}});
  ifs.maps.push_back({0.5, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0.25, std::sqrt(3.0) / 4.0, 0.0}});
  return ifs;
}

IFS cantor_dust_ifs() {
  IFS ifs;
  for (const Vec t : {Vec{0, 0, 0}, Vec{0.75, 0, 0}, Vec{0, 0.75, 0}, Vec{0.75, 0.75, 0}}) {
    ifs.maps.push_back({0.25, {1, 0, 0, 0, 1, 0, 0, 0, 1}, t});
  }
  return ifs;
}

CompactSet unit_triangle_boundary() {
  const Vec a{0, 0, 0}, b{1, 0, 0}, c{0.5, std::sqrt(3.0) / 2.0, 0};
  return make_segments({{a, b}, {b, c}, {c, a}});
}

CompactSet unit_triangle() { return make_polygon({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}}); }

CompactSet sierpinski_gasket(int depth) {
  if (depth < 0) throw Error(ErrorCode::kInvalidArgument, "depth must be non-negative");
  if (depth > kMaxGasketDepth) {
    throw Error(ErrorCode::kDepthTooLarge, "gasket depth " + std::to_string(depth) + " exceeds " + std::to_string(kMaxGasketDepth));
  }
  CompactSet skeleton = ifs_apply(gasket_ifs(), unit_triangle_boundary(), depth);
  Prefractal pf{gasket_ifs(), depth, std::get<SegmentSet>(std::move(skeleton.shape))};
  return {2, std::move(pf)};
}

CompactSet ifs_apply(const IFS& ifs, const CompactSet& set, int iterations) {
  if (iterations < 0) throw Error(ErrorCode::kInvalidArgument, "iterations must be non-negative");
  if (ifs.maps.empty()) throw Error(ErrorCode::kInvalidArgument, "IFS has no maps");
  for (const auto& m : ifs.maps) {
    if (!(m.ratio > 0.0 && m.ratio < 1.0)) throw Error(ErrorCode::kInvalidArgument, "similarity ratios must lie in (0, 1)");
  }
  const double growth = std::pow(static_cast<double>(ifs.maps.size()), iterations);

  auto expand_points = [&](std::vector<Vec> cur) {
    check_count(static_cast<std::size_t>(growth * static_cast<double>(cur.size())));
    for (int it = 0; it < iterations; ++it) {
      std::vector<Vec> next;
      next.reserve(cur.size() * ifs.maps.size());
      for (const auto& m : ifs.maps)
        for (const auto& p : cur) next.push_back(m.apply(p));
      cur = std::move(next);
    }
    return cur;
  };
  auto expand_segments = [&](std::vector<Segment> cur) {
    check_count(static_cast<std::size_t>(growth * static_cast<double>(cur.size())));
    for (int it = 0; it < iterations; ++it) {
      std::vector<Segment> next;
      next.reserve(cur.size() * ifs.maps.size());
      for (const auto& m : ifs.maps)
        for (const auto& s : cur) next.push_back({m.apply(s.a), m.apply(s.b)});
      cur = std::move(next);
    }
    return cur;
  };

  return std::visit(
      Overloaded{
          [&](const PointCloud& p) { return CompactSet{set.dim, PointCloud{expand_points(p.points)}}; },
          [&](const SegmentSet& s) { return CompactSet{set.dim, SegmentSet{expand_segments(s.segments)}}; },
          [&](const Prefractal& p) {
            Prefractal out;
            out.ifs = ifs;
            out.depth = (p.ifs == ifs) ? p.depth + iterations : iterations;
            out.realization = std::visit(
                Overloaded{[&](const PointCloud& c) -> std::variant<PointCloud, SegmentSet> { return PointCloud{expand_points(c.points)}; },
                           [&](const SegmentSet& c) -> std::variant<PointCloud, SegmentSet> { return SegmentSet{expand_segments(c.segments)}; }},
                p.realization);
            return CompactSet{set.dim, std::move(out)};
          },
          [&](const PolygonRegion& poly) {
            std::vector<CompactSet> parts{CompactSet{2, poly}};
            check_count(static_cast<std::size_t>(growth));
            for (int it = 0; it < iterations; ++it) {
              std::vector<CompactSet> next;
              for (const auto& m : ifs.maps) {
                for (const auto& part : parts) {
                  const auto& src = std::get<PolygonRegion>(part.shape);
                  PolygonRegion img;
                  for (const auto& v : src.outer) img.outer.push_back(m.apply(v));
                  for (const auto& h : src.holes) {
                    Ring hr;
                    for (const auto& v : h) hr.push_back(m.apply(v));
                    img.holes.push_back(std::move(hr));
                  }
                  next.push_back({2, std::move(img)});
                }
              }
              parts = std::move(next);
            }
            if (parts.size() == 1) return parts.front();
            return make_union(std::move(parts));
          },
          [&](const VoxelMask&) -> CompactSet {
            throw Error(ErrorCode::kInvalidArgument, "ifs_apply accepts point clouds, skeletons and polygon regions");
          },
          [&](const SetUnion& u) {
            std::vector<CompactSet> parts;
            for (const auto& p : u.parts) parts.push_back(ifs_apply(ifs, p, iterations));
            return make_union(std::move(parts));
          },
      },
      set.shape);
}

PointCloud sample_boundary(const CompactSet& set, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::kInvalidArgument, "spacing must be positive");
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "cannot sample an empty set");
  if (const auto* pc = std::get_if<PointCloud>(&set.shape)) return *pc;

  std::vector<Vec> out;
  for_each_leaf(set, [&](const Shape& leaf) {
    std::visit(Overloaded{
                   [&](const PointCloud& p) { out.insert(out.end(), p.points.begin(), p.points.end()); },
                   [&](const SegmentSet& s) {
                     for (const auto& seg : s.segments) sample_segment(seg.a, seg.b, spacing, out);
                   },
                   [&](const PolygonRegion& p) {
                     auto ring = [&](const Ring& r) {
                       for (std::size_t i = 0; i < r.size(); ++i) sample_segment(r[i], r[(i + 1) % r.size()], spacing, out);
                     };
                     ring(p.outer);
                     for (const auto& h : p.holes) ring(h);
                   },
                   [&](const VoxelMask& v) {
                     // Exposed faces of occupied cells, sampled on a lattice.
                     const int dim = v.extents[2] > 1 ? 3 : 2;
                     const int m = static_cast<int>(std::ceil(v.h / spacing - 1e-9));
                     for (int k = 0; k < v.extents[2]; ++k)
                       for (int j = 0; j < v.extents[1]; ++j)
                         for (int i = 0; i < v.extents[0]; ++i) {
                           if (!v.at(i, j, k)) continue;
                           const Vec base = v.origin + Vec{double(i), double(j), dim == 3 ? double(k) : 0.0} * v.h;
                           for (int axis = 0; axis < dim; ++axis) {
                             for (int side = 0; side < 2; ++side) {
                               std::array<int, 3> nb{i, j, k};
                               nb[axis] += side ? 1 : -1;
                               if (v.at(nb[0], nb[1], nb[2])) continue;
                               const int u_axis = (axis + 1) % dim;
                               const int w_axis = dim == 3 ? (axis + 2) % dim : -1;
                               for (int a = 0; a <= m; ++a) {
                                 for (int b = 0; b <= (dim == 3 ? m : 0); ++b) {
                                   Vec p = base;
                                   p[axis] += side * v.h;
                                   p[u_axis] += v.h * a / m;
                                   if (w_axis >= 0) p[w_axis] += v.h * b / m;
                                   out.push_back(p);
                                 }
                               }
                             }
                           }
                         }
                   },
                   [&](const Prefractal& p) {
                     std::visit(Overloaded{[&](const PointCloud& c) { out.insert(out.end(), c.points.begin(), c.points.end()); },
                                           [&](const SegmentSet& s) {
                                             for (const auto& seg : s.segments) sample_segment(seg.a, seg.b, spacing, out);
                                           }},
                                p.realization);
                   },
                   [](const SetUnion&) {},
               },
               leaf);
  });
  return PointCloud{dedupe(std::move(out))};
}

CompactSet translate(const CompactSet& set, const Vec& offset) {
  auto shift_points = [&](std::vector<Vec> pts) {
    for (auto& p : pts) p += offset;
    return pts;
  };
  auto shift_segments = [&](std::vector<Segment> segs) {
    for (auto& s : segs) {
      s.a += offset;
      s.b += offset;
    }
    return segs;
  };
  return std::visit(
      Overloaded{
          [&](const PointCloud& p) { return CompactSet{set.dim, PointCloud{shift_points(p.points)}}; },
          [&](const SegmentSet& s) { return CompactSet{set.dim, SegmentSet{shift_segments(s.segments)}}; },
          [&](const PolygonRegion& p) {
            PolygonRegion out{shift_points(p.outer), {}};
            for (const auto& h : p.holes) out.holes.push_back(shift_points(h));
            return CompactSet{set.dim, std::move(out)};
          },
          [&](const VoxelMask& v) {
            VoxelMask out = v;
            out.origin += offset;
            return CompactSet{set.dim, std::move(out)};
          },
          [&](const Prefractal& p) {
            Prefractal out = p;
            std::visit(Overloaded{[&](PointCloud& c) { c.points = shift_points(std::move(c.points)); },
                                  [&](SegmentSet& s) { s.segments = shift_segments(std::move(s.segments)); }},
                       out.realization);
            // Conjugate the maps by the translation so the IFS still generates the shifted attractor.
            for (auto& m : out.ifs.maps) {
              const Vec linear = m.apply(offset) - m.translation;
              m.translation += offset - linear;
            }
            return CompactSet{set.dim, std::move(out)};
          },
          [&](const SetUnion& u) {
            std::vector<CompactSet> parts;
            for (const auto& p : u.parts) parts.push_back(translate(p, offset));
            return CompactSet{set.dim, SetUnion{std::move(parts)}};
          },
      },
      set.shape);
}

void for_each_leaf(const CompactSet& set, const std::function<void(const Shape&)>& fn) {
  if (const auto* u = std::get_if<SetUnion>(&set.shape)) {
    for (const auto& p : u->parts) for_each_leaf(p, fn);
    return;
  }
  fn(set.shape);
}

Box bounding_box(const CompactSet& set) {
  Box box;
  for_each_leaf(set, [&](const Shape& leaf) {
    std::visit(Overloaded{
                   [&](const PointCloud& p) {
                     for (const auto& q : p.points) box.expand(q);
                   },
                   [&](const SegmentSet& s) {
                     for (const auto& q : s.segments) {
                       box.expand(q.a);
                       box.expand(q.b);
                     }
                   },
                   [&](const PolygonRegion& p) {
                     for (const auto& q : p.outer) box.expand(q);
                   },
                   [&](const VoxelMask& v) {
                     const int dim = v.extents[2] > 1 ? 3 : 2;
                     for (int k = 0; k < v.extents[2]; ++k)
                       for (int j = 0; j < v.extents[1]; ++j)
                         for (int i = 0; i < v.extents[0]; ++i) {
                           if (!v.at(i, j, k)) continue;
                           const Vec lo = v.origin + Vec{double(i), double(j), dim == 3 ? double(k) : 0.0} * v.h;
                           box.expand(lo);
                           box.expand(lo + Vec{v.h, v.h, dim == 3 ? v.h : 0.0});
                         }
                   },
                   [&](const Prefractal& p) {
                     std::visit(Overloaded{[&](const PointCloud& c) {
                                             for (const auto& q : c.points) box.expand(q);
                                           },
                                           [&](const SegmentSet& s) {
                                             for (const auto& q : s.segments) {
                                               box.expand(q.a);
                                               box.expand(q.b);
                                             }
                                           }},
                                p.realization);
                   },
                   [](const SetUnion&) {},
               },
               leaf);
  });
  return box;
}

double lebesgue_measure(const CompactSet& set) {
  double total = 0.0;
  for_each_leaf(set, [&](const Shape& leaf) {
    if (const auto* p = std::get_if<PolygonRegion>(&leaf)) {
      total += 0.5 * signed_area2(p->outer);
      for (const auto& h : p->holes) total += 0.5 * signed_area2(h);  // holes are clockwise
    } else if (const auto* v = std::get_if<VoxelMask>(&leaf)) {
      const int dim = v->extents[2] > 1 ? 3 : 2;
      const auto count = std::count_if(v->occupied.begin(), v->occupied.end(), [](auto b) { return b != 0; });
      total += static_cast<double>(count) * std::pow(v->h, dim);
    }
  });
  return total;
}

bool contains_point(const PolygonRegion& poly, const Vec& p) {
  bool inside = false;
  auto ring = [&](const Ring& r) {
    for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
      const Vec& a = r[i];
      const Vec& b = r[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  };
  ring(poly.outer);
  for (const auto& h : poly.holes) ring(h);
  return inside;
}

}  // namespace aniso
