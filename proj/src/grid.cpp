#include "hessianlab/grid.hpp"

#include <cmath>
#include <random>

#include "hessianlab/parallel.hpp"

namespace hessianlab {

GridDomain GridDomain::tensor(int n, const Ball& region, int perAxis, double exclusion, SingularSet singular) {
  requireDimension(n);
  requireSameDimension(static_cast<int>(region.center.size()), n);
  if (perAxis < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  if (!(region.radius > 0)) throw Error(ErrorCode::InvalidArgument, "grid region needs a positive radius");
  GridDomain g;
  g.n = n;
  g.region = region;
  g.perAxis = perAxis;
  g.exclusion = exclusion;
  g.singular = singular;
  g.spacing = 2 * region.radius / perAxis;
  const int d = 2 * n;
  const double cell = std::pow(g.spacing, d);
  std::vector<int> idx(d, 0);
  std::size_t inside = 0;
  // Strictly inside: cell centres can fall on the sphere up to rounding.
  const double r2 = region.radius * region.radius * (1 - 1e-12);
  while (true) {
    Point offset(n);
    double norm2 = 0;
    for (int a = 0; a < d; a += 2) {
      const double x = -region.radius + (idx[a] + 0.5) * g.spacing;
      const double y = -region.radius + (idx[a + 1] + 0.5) * g.spacing;
      offset(a / 2) = {x, y};
      norm2 += x * x + y * y;
    }
    if (norm2 < r2) {
      ++inside;
      const Point z = region.center + offset;
      const bool excluded = singular == SingularSet::ZPrimeZero && zPrimeNorm(z) < exclusion;
      if (!excluded) g.points.push_back(z);
    }
    int a = 0;
    while (a < d && ++idx[a] == perAxis) idx[a++] = 0;
    if (a == d) break;
  }
  const double exact = region.volume();
  g.rawVolumeRatio = inside * cell / exact;
  const double w = g.points.empty() ? 0.0 : exact / static_cast<double>(g.points.size());
  g.weights.assign(g.points.size(), w);
  return g;
}

double GridDomain::totalWeight() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

Json GridDomain::describe() const {
  Json j;
  j["n"] = n;
  j["center"] = toJson(region.center);
  j["radius"] = region.radius;
  j["per_axis"] = perAxis;
  j["points"] = points.size();
  j["spacing"] = spacing;
  j["exclusion"] = exclusion;
  j["raw_volume_ratio"] = rawVolumeRatio;
  return j;
}

std::vector<Point> sphereSample(const Ball& ball, std::size_t count, std::uint64_t seed) {
  const int n = static_cast<int>(ball.center.size());
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    for (std::complex<double> dir : {std::complex<double>(1, 0), std::complex<double>(-1, 0),
                                     std::complex<double>(0, 1), std::complex<double>(0, -1)}) {
      Point z = ball.center;
      z(i) += ball.radius * dir;
      out.push_back(z);
    }
  }
  for (std::size_t i = out.size(); i < count; ++i) {
    std::mt19937_64 rng(mixSeed(seed, i));
    std::normal_distribution<double> gauss;
    Point dir(n);
    for (int k = 0; k < n; ++k) dir(k) = {gauss(rng), gauss(rng)};
    out.push_back(ball.center + dir * (ball.radius / dir.norm()));
  }
  return out;
}

}  // namespace hessianlab
