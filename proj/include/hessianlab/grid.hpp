#pragma once

#include <cstdint>
#include <vector>

#include "hessianlab/testfields.hpp"

namespace hessianlab {

/// Quadrature points inside a ball: cell centers of a tensor grid over the
/// real coordinates, optionally kept away from a singular set.
struct GridDomain {
  int n = 0;
  Ball region;
  int perAxis = 0;
  double spacing = 0;
  double exclusion = 0;
  SingularSet singular = SingularSet::None;
  std::vector<Point> points;
  std::vector<double> weights;
  /// Sum of raw cell volumes divided by the exact ball volume, before the
  /// weights are rescaled to sum to the exact volume.
  double rawVolumeRatio = 0;

  /// perAxis cells per real axis; points within `exclusion` of the singular set are dropped.
  static GridDomain tensor(int n, const Ball& region, int perAxis, double exclusion = 0,
                           SingularSet singular = SingularSet::None);

  std::size_t size() const { return points.size(); }
  double totalWeight() const;
  Json describe() const;
};

/// Points on the sphere |z - c| = R: the 4n real axis directions followed by
/// seeded uniformly random directions, `count` in total (at least 4n).
std::vector<Point> sphereSample(const Ball& ball, std::size_t count, std::uint64_t seed);

}  // namespace hessianlab
