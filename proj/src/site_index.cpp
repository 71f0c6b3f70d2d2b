#include "aniso/site_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "aniso/error.hpp"

namespace aniso {

SiteIndex::SiteIndex(std::vector<Vec> sites, int dim, int leaf_size)
    : dim_(dim), leaf_size_(std::max(1, leaf_size)), sites_(std::move(sites)) {
  if (sites_.empty()) throw Error(ErrorCode::kEmptySet, "site index needs at least one site");
  nodes_.reserve(2 * sites_.size() / leaf_size_ + 2);
  build(0, static_cast<int>(sites_.size()));
}

int SiteIndex::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  Box box;
  for (int i = begin; i < end; ++i) box.expand(sites_[i]);
  nodes_[id].box = box;
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= leaf_size_) return id;

  const Vec ext = box.extent();
  int axis = 0;
  for (int a = 1; a < dim_; ++a)
    if (ext[a] > ext[axis]) axis = a;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(sites_.begin() + begin, sites_.begin() + mid, sites_.begin() + end,
                   [axis](const Vec& p, const Vec& q) { return p[axis] < q[axis]; });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

namespace {

// Lower bound of the gauge over x - box from the facet inequalities; only
// worth its cost for bodies with few facets.
constexpr std::size_t kFacetBoundLimit = 8;

struct FacetBound {
  std::array<Vec, kFacetBoundLimit> n;  // normal / offset
  std::size_t count = 0;

  double operator()(const Box& box, const Vec& x, int dim) const {
    double best = 0.0;
    for (std::size_t f = 0; f < count; ++f) {
      double m = 0.0;
      for (int i = 0; i < dim; ++i) m += std::fmin(n[f][i] * (x[i] - box.hi[i]), n[f][i] * (x[i] - box.lo[i]));
      best = std::fmax(best, m);
    }
    return best;
  }
};

}  // namespace

SiteIndex::Hit SiteIndex::nearest(const Vec& x, const ConvexBody& body, double bound, int hint) const {
  Hit best{bound, -1};
  FacetBound fb;
  if (body.facets().size() <= kFacetBoundLimit) {
    for (const Facet& f : body.facets()) fb.n[fb.count++] = f.normal * (1.0 / f.offset);
  }
  if (hint >= 0 && hint < static_cast<int>(sites_.size())) {
    const double g = body.gauge(x - sites_[hint]);
    if (g < best.value) best = {g, hint};
  }
  const double b = body.outradius();

  std::array<int, 128> stack;
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance(node.box, x, dim_) >= b * best.value) continue;
    if (fb.count > 0 && fb(node.box, x, dim_) >= best.value) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const Vec d = x - sites_[i];
        const double cut = b * best.value;
        if (norm2(d) >= cut * cut) continue;
        const double g = body.gauge(d);
        if (g < best.value) best = {g, i};
      }
      continue;
    }
    const double dl = box_distance(nodes_[node.left].box, x, dim_);
    const double dr = box_distance(nodes_[node.right].box, x, dim_);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best;
}

SiteIndex::Hit SiteIndex::nearest_euclidean(const Vec& x) const {
  Hit best;
  std::array<int, 128> stack;
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance(node.box, x, dim_) >= best.value) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const double d = norm(x - sites_[i]);
        if (d < best.value) best = {d, i};
      }
      continue;
    }
    const double dl = box_distance(nodes_[node.left].box, x, dim_);
    const double dr = box_distance(nodes_[node.right].box, x, dim_);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best;
}

}  // namespace aniso
