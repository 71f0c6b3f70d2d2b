#pragma once

#include <cstdint>

#include "aniso/compact_set.hpp"
#include "aniso/convex_body.hpp"

namespace aniso {

struct MonteCarloEstimate {
  double volume = 0.0;
  double sigma = 0.0;      // binomial standard error
  double box_volume = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

/// λ^n(E ⊕ rC) by rejection sampling over the exact bounding box of E ⊕ rC.
/// Every sample is tested against the raw geometry of E (points, segments,
/// polygons) by brute force: no distance field, no spatial index.
/// Throws kEmptySet, kNonPositiveRadius, kInvalidArgument (samples < 10^4,
/// voxel sets).
MonteCarloEstimate minkowski_sum_oracle(const CompactSet& set, const ConvexBody& body, double r,
                                        std::uint64_t samples, std::uint64_t seed);

}  // namespace aniso
