#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hessianlab/barrier.hpp"
#include "hessianlab/grid.hpp"
#include "hessianlab/operators.hpp"
#include "hessianlab/report.hpp"
#include "hessianlab/testfields.hpp"

namespace hessianlab {

struct AbpConfig {
  int n = 2;
  /// Sobolev exponent r of the test class; must exceed n.
  double rExp = 4;
  /// Integrability exponent p of the right-hand side (of f in corollary mode).
  double pExp = 4;
  /// Homogeneity degree k and normalization delta, used in corollary mode.
  double k = 1;
  double delta = 1;
  bool corollary = false;
  int perAxis = 9;
  int radialNodes = 512;
  /// Radial bands of the piecewise-constant majorant.
  int bands = 64;
  /// Directions per sphere for boundary sampling and majorization; 0 picks
  /// max(2^{2n-1}, 4096) for the boundary and max(2^{2n-1}, 256) per majorant radius.
  std::size_t angularSamples = 0;
  double safetyFactor = 1.01;
  std::uint64_t seed = 0;

  double qExp() const { return pExp / n; }
  /// Throws HypothesisViolated when r > n, p > n (or p >= 1, p > n/k in corollary mode) fail.
  void validate() const;
  Json describe() const;
};

/// u shifted to be nonnegative on the sampled boundary, with g := G(z, D^2 u) on the grid.
struct SupersolutionInstance {
  std::string id;
  Operator op;
  ScalarField u;
  Ball domain;
  GridDomain grid;
  std::vector<double> g;
  std::vector<Point> boundary;
  double boundaryMin = 0;
  double shift = 0;
  /// Radius of the ball the domain is rescaled from (enclosing factor times the domain radius).
  double enclosingRadius = 1;
};

/// Builds the instance on `domain`, shifted so the sampled boundary minimum is 0.
/// Throws OffCone with the offending point when D^2 u leaves the cone.
SupersolutionInstance makeSupersolution(std::string id, const Operator& op, const ScalarField& u, const Ball& domain,
                                        const AbpConfig& cfg, double enclosingFactor = 1);

/// Radial majorant of g_+ on the rescaled unit ball: piecewise constant over
/// cfg.bands bands, each the safety factor times the largest sampled value in
/// the band and its neighbours; zero outside the rescaled domain.
RadialDensity radialMajorant(const SupersolutionInstance& inst, const AbpConfig& cfg);

/// Barrier comparison and the sup estimate: rho <= u + 1e-6 on the grid,
/// sup(-u) <= sup(-rho), and the realized constant sup(-u) / ||g_+||_{L^p}
/// (divided by ||f||^{1/k}, f = (delta G)^k, in corollary mode).
/// A vanishing right-hand side requires sup(-u) <= 1e-9 instead.
Report abpEstimateCheck(const SupersolutionInstance& inst, const AbpConfig& cfg);

/// Strong-form maximum principle on a grid in B_1: hypotheses a >= 0,
/// tr a >= M and tr(a D^2 u) >= 0 are checked first (HypothesisViolated
/// otherwise); then max over the grid <= boundary max + tol_geom.
Report maxPrincipleCheck(const CoefficientField& coeffs, const ScalarField& u, const GridDomain& grid, double M,
                         std::size_t boundarySamples = 0, std::uint64_t seed = 0);

struct AbpInstanceSpec {
  std::string id;
  Operator op;
  ScalarField u;
  Ball domain;
  double enclosingFactor = 1;
  int perAxis = 9;
};

/// The default twelve-instance corpus (quadratics, perturbed quadratics,
/// Pogorelov restrictions; Monge-Ampere and sigma_2; n = 2, 3).
std::vector<AbpInstanceSpec> defaultAbpCorpus();
/// Linear operator tr(A)/n with u = Re(z_1^2): g vanishes identically.
AbpInstanceSpec zeroRightHandSideInstance();

struct MaxPrincipleSpec {
  std::string id;
  CoefficientField coeffs;
  ScalarField u;
  double M = 0;
  int perAxis = 9;
};

std::vector<MaxPrincipleSpec> defaultMaxPrincipleCorpus();
/// u = -||z||^2 with identity coefficients (hypothesis fails).
MaxPrincipleSpec maxPrincipleControl();

/// Runs makeSupersolution + abpEstimateCheck for one spec.
Report runAbpInstance(const AbpInstanceSpec& spec, AbpConfig cfg);

struct SweepRow {
  std::string instanceId;
  int n = 0;
  double p = 0, r = 0, k = 0, delta = 0;
  double supNegU = 0, lpNorm = 0, realizedC = 0;
  bool pass = false;
};

struct SweepTable {
  std::string family;
  std::vector<SweepRow> rows;
  std::vector<double> runningMax;

  /// Columns: instance_id, n, p, r, k, delta, sup_neg_u, lp_norm, realized_C, pass.
  void writeCsv(std::ostream& os) const;
  Json toJson() const;
};

/// Families: "radius" (u = ||z||^2 - d^2 on B_d, d in {0.25, 0.5, 1}, MA n = 2),
/// "p" (p in {2.5, 3, 4}), "scaling" (t ||z||^2, t in {0.5, 1, 2, 4}),
/// "corpus" (the default corpus).
SweepTable constantSweep(const std::string& family, const AbpConfig& cfg);

}  // namespace hessianlab
