#pragma once

#include <limits>
#include <vector>

#include "aniso/convex_body.hpp"
#include "aniso/vec.hpp"

namespace aniso {

/// Static k-d tree over sample sites answering anisotropic nearest-site
/// queries min_y gauge_C(x - y).
///
/// Subtrees are pruned with the Euclidean bracket |z|/b <= gauge_C(z):
/// a node whose box lies farther than b * best from x cannot improve the
/// current best. The answer is exact; pruning only affects cost.
class SiteIndex {
 public:
  struct Hit {
    double value = std::numeric_limits<double>::infinity();
    int index = -1;  // into sites(); -1 when nothing beat the bound
  };

  SiteIndex(std::vector<Vec> sites, int dim, int leaf_size = 8);

  int dim() const { return dim_; }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Vec>& sites() const { return sites_; }
  const Box& bounds() const { return nodes_.front().box; }

  /// Nearest site under the gauge of `body`, considering only values strictly
  /// below `bound`. `hint` (a site index) seeds the search.
  Hit nearest(const Vec& x, const ConvexBody& body, double bound = std::numeric_limits<double>::infinity(),
              int hint = -1) const;

  /// Euclidean nearest site (value is the distance).
  Hit nearest_euclidean(const Vec& x) const;

 private:
  struct Node {
    Box box;
    int begin = 0;
    int end = 0;
    int left = -1;
    int right = -1;
  };

  int build(int begin, int end);

  int dim_;
  int leaf_size_;
  std::vector<Vec> sites_;
  std::vector<Node> nodes_;
};

}  // namespace aniso
