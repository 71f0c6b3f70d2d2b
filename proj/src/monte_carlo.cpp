#include "aniso/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aniso/error.hpp"
#include "aniso/rng.hpp"

namespace aniso {
namespace {

struct Primitive {
  Vec a;
  Vec b;   // equal to a for points
  Box box;
};

struct Region {
  const PolygonRegion* poly;
  Box box;
};

// Does the segment a + t (b - a), t ∈ [0, 1], meet {y : ν·y >= ν·x - r o for all facets}?
bool segment_meets(const Vec& a, const Vec& b, const Vec& x, double r, const ConvexBody& body) {
  double lo = 0.0, hi = 1.0;
  const Vec d = b - a;
  for (const auto& f : body.facets()) {
    const double need = dot(f.normal, x) - r * f.offset;  // ν·y >= need
    const double at_a = dot(f.normal, a) - need;
    const double slope = dot(f.normal, d);
    if (slope == 0.0) {
      if (at_a < 0.0) return false;
      continue;
    }
    const double t = -at_a / slope;
    if (slope > 0.0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
    if (lo > hi) return false;
  }
  return true;
}

bool box_near(const Box& box, const Vec& x, double reach, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (x[i] < box.lo[i] - reach || x[i] > box.hi[i] + reach) return false;
  }
  return true;
}

}  // namespace

MonteCarloEstimate minkowski_sum_oracle(const CompactSet& set, const ConvexBody& body, double r,
                                        std::uint64_t samples, std::uint64_t seed) {
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "oracle needs a nonempty set");
  if (!(r > 0.0)) throw Error(ErrorCode::kNonPositiveRadius, "oracle needs r > 0");
  if (samples < 10000) throw Error(ErrorCode::kInvalidArgument, "oracle needs at least 10^4 samples");
  if (set.dim != body.dim()) throw Error(ErrorCode::kInvalidArgument, "set and body dimensions differ");
  const int dim = set.dim;

  std::vector<Primitive> prims;
  std::vector<Region> regions;
  auto add = [&](const Vec& a, const Vec& b) {
    Primitive p{a, b, {}};
    p.box.expand(a);
    p.box.expand(b);
    prims.push_back(p);
  };
  auto add_ring = [&](const Ring& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) add(ring[i], ring[(i + 1) % ring.size()]);
  };
  for_each_leaf(set, [&](const Shape& leaf) {
    if (const auto* p = std::get_if<PointCloud>(&leaf)) {
      for (const auto& q : p->points) add(q, q);
    } else if (const auto* s = std::get_if<SegmentSet>(&leaf)) {
      for (const auto& q : s->segments) add(q.a, q.b);
    } else if (const auto* poly = std::get_if<PolygonRegion>(&leaf)) {
      Region reg{poly, {}};
      for (const auto& q : poly->outer) reg.box.expand(q);
      regions.push_back(reg);
      add_ring(poly->outer);
      for (const auto& h : poly->holes) add_ring(h);
    } else if (const auto* pf = std::get_if<Prefractal>(&leaf)) {
      if (const auto* c = std::get_if<PointCloud>(&pf->realization)) {
        for (const auto& q : c->points) add(q, q);
      } else {
        for (const auto& q : std::get<SegmentSet>(pf->realization).segments) add(q.a, q.b);
      }
    } else {
      throw Error(ErrorCode::kInvalidArgument, "the oracle does not support voxel masks");
    }
  });

  // Exact bounding box of E ⊕ rC: bbox(E) + r [-h_C(-e_i), h_C(e_i)].
  const Box ebox = bounding_box(set);
  Box box = ebox;
  double box_volume = 1.0;
  for (int i = 0; i < dim; ++i) {
    Vec e;
    e[i] = 1.0;
    box.lo[i] -= r * body.support(-e);
    box.hi[i] += r * body.support(e);
    box_volume *= box.hi[i] - box.lo[i];
  }
  const double reach = r * body.outradius();

  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    Vec x;
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
    bool hit = false;
    for (const auto& reg : regions) {
      if (box_near(reg.box, x, 0.0, dim) && contains_point(*reg.poly, x)) {
        hit = true;
        break;
      }
    }
    for (std::size_t p = 0; !hit && p < prims.size(); ++p) {
      const Primitive& q = prims[p];
      if (!box_near(q.box, x, reach, dim)) continue;
      hit = q.a == q.b ? body.gauge(x - q.a) <= r : segment_meets(q.a, q.b, x, r, body);
    }
    hits += hit ? 1 : 0;
  }

  MonteCarloEstimate out;
  out.samples = samples;
  out.hits = hits;
  out.box_volume = box_volume;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  out.volume = box_volume * p;
  out.sigma = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return out;
}

}  // namespace aniso
