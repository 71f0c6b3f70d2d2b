#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "aniso/vec.hpp"

namespace aniso {

struct PointCloud {
  std::vector<Vec> points;
};

struct Segment {
  Vec a;
  Vec b;
};

/// Union of closed segments: a one-dimensional skeleton such as the
/// boundary of a prefractal's triangles.
struct SegmentSet {
  std::vector<Segment> segments;
};

using Ring = std::vector<Vec>;

/// Closed planar region bounded by a simple outer ring with optional holes.
/// Stored with the outer ring counterclockwise and holes clockwise, so the
/// right-hand normal (dy, -dx) of every edge points out of the region.
struct PolygonRegion {
  Ring outer;
  std::vector<Ring> holes;
};

/// Union of closed axis-aligned cells of side h, cell (i, j, k) spanning
/// origin + [i, i+1] x [j, j+1] x [k, k+1] times h.
struct VoxelMask {
  Vec origin;
  double h = 1.0;
  std::array<int, 3> extents{0, 0, 1};
  std::vector<std::uint8_t> occupied;  // x fastest, then y, then z

  bool at(int i, int j, int k) const;
};

/// x -> ratio * R x + translation with R orthogonal (row-major).
struct Similarity {
  double ratio = 0.5;
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec translation;

  Vec apply(const Vec& x) const;
  bool operator==(const Similarity&) const = default;
};

struct IFS {
  std::vector<Similarity> maps;
  bool operator==(const IFS&) const = default;
};

/// Finite-depth approximation of an IFS attractor.
struct Prefractal {
  IFS ifs;
  int depth = 0;
  std::variant<PointCloud, SegmentSet> realization;
};

struct CompactSet;

/// Union of pairwise disjoint parts.
struct SetUnion {
  std::vector<CompactSet> parts;
};

using Shape = std::variant<PointCloud, SegmentSet, PolygonRegion, VoxelMask, Prefractal, SetUnion>;

/// A compact set E ⊂ R^n in one of its concrete representations.
struct CompactSet {
  int dim = 2;
  Shape shape;

  bool empty() const;
  std::string kind() const;
};

CompactSet make_points(std::vector<Vec> points, int dim = 2);
CompactSet make_segments(std::vector<Segment> segments, int dim = 2);
/// Validates and orients the rings. Throws kSelfIntersecting or kInvalidSet.
CompactSet make_polygon(Ring outer, std::vector<Ring> holes = {});
CompactSet make_union(std::vector<CompactSet> parts);

/// Three half-scale similarities with fixed points (0,0), (1,0), (1/2, √3/2).
IFS gasket_ifs();
/// Four quarter-scale maps onto the corners of the unit square.
IFS cantor_dust_ifs();

/// Boundary of the unit equilateral triangle with base [(0,0), (1,0)].
CompactSet unit_triangle_boundary();
/// The filled triangle with the same vertices.
CompactSet unit_triangle();

inline constexpr int kMaxGasketDepth = 14;

/// Level-`depth` skeleton: 3^depth triangle boundaries of side 2^-depth.
CompactSet sierpinski_gasket(int depth);

/// Union of all |maps|^iterations composed images of `set`.
CompactSet ifs_apply(const IFS& ifs, const CompactSet& set, int iterations);

/// Sites such that every point of E (every boundary point, for regions) lies
/// within spacing/2 of a site. Duplicates are removed.
PointCloud sample_boundary(const CompactSet& set, double spacing);

CompactSet translate(const CompactSet& set, const Vec& offset);
Box bounding_box(const CompactSet& set);

/// λ^n(E), exact for every representation (0 for points and skeletons).
double lebesgue_measure(const CompactSet& set);

/// Calls `fn` on every non-union leaf shape.
void for_each_leaf(const CompactSet& set, const std::function<void(const Shape&)>& fn);

/// Even-odd point-in-region test (boundary points count as inside up to rounding).
bool contains_point(const PolygonRegion& poly, const Vec& p);

}  // namespace aniso
