#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "hessianlab/grid.hpp"
#include "hessianlab/operators.hpp"
#include "hessianlab/report.hpp"
#include "hessianlab/testfields.hpp"

namespace hessianlab {

/// Nonnegative radial density g(r) on [0, 1], piecewise continuous with the
/// listed jump points.
struct RadialDensity {
  std::function<double(double)> fn;
  std::vector<double> jumps;
  std::string tag;

  double operator()(double r) const { return fn(r); }

  static RadialDensity constant(double c);
  /// c on [0, s), 0 afterwards.
  static RadialDensity indicator(double c, double s);
  /// sum_i coeffs[i] r^i
  static RadialDensity poly(std::vector<double> coeffs);
  /// values[j] on [edges[j], edges[j + 1]); edges run from 0 to 1.
  static RadialDensity piecewiseConstant(std::vector<double> edges, std::vector<double> values);
  /// Arbitrary continuous density.
  static RadialDensity custom(std::function<double(double)> fn, std::string tag, std::vector<double> jumps = {});
  /// CLI tags: constant:c, indicator:c:s, poly:a0,a1,...
  static RadialDensity parse(const std::string& tag);

  RadialDensity scaled(double t) const;
  /// r -> a g(r)^p
  RadialDensity power(double p, double a = 1) const;
};

/// 4^n n!: (dd^c rho)^n = 4^n n! det(D^2 rho) dV.
double maNormalization(int n);
/// 1 / ((n - 1)! 2^{n-1}), the constant in (r v')^n = K int_0^r g s^{2n-1} ds.
double radialConstant(int n);

/// Radial solution rho(z) = v(|z|) of (dd^c rho)^n = g dV on B_1, rho = 0 on the sphere.
class RadialProfile {
 public:
  int n() const { return n_; }
  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& derivatives() const { return vp_; }
  const RadialDensity& density() const { return density_; }
  double normalization() const { return maNormalization(n_); }
  int cells() const { return cells_; }

  /// v(r) for r in [0, 1].
  double value(double r) const;
  double derivative(double r) const;
  /// v'(r) / (2r), eigenvalue of D^2 rho on the complex tangent directions
  /// (limit value at r = 0).
  double tangential(double r) const;
  /// (v'' + v'/r) / 4, eigenvalue of D^2 rho in the radial direction.
  double radial(double r) const;
  /// D^2 rho(z) = tangential I + (radial - tangential) bar z bar z^* / |z|^2.
  Matrix hessian(const Point& z) const;
  /// rho as a scalar field on B_1 with the reconstructed Hessian.
  ScalarField field() const;

  void writeCsv(std::ostream& os) const;

 private:
  friend RadialProfile radialMaSolve(const RadialDensity&, int, int);
  std::size_t cellOf(double r) const;
  double integralTo(double r) const;

  int n_ = 0;
  int cells_ = 0;
  double k_ = 0;
  RadialDensity density_;
  std::vector<double> r_, mass_, v_, vp_;
};

/// Solves (r v')^n = K int_0^r g s^{2n-1} ds, v(r) = -int_r^1 v'(s) ds with
/// jump-aligned cells: Gauss-Legendre for the mass, Simpson for v.
/// Throws NegativeDensity.
RadialProfile radialMaSolve(const RadialDensity& density, int n, int M = 256);

/// sup(-rho) = -v(0).
double supDeficit(const RadialProfile& profile);

/// (int_{B_1} |g|^q dV)^{1/q} with the sphere measure 2 pi^n / (n - 1)!.
double lqNorm(const RadialDensity& density, double q, int n, int M = 2048);

/// supDeficit / lqNorm^{1/n}. Throws ZeroDensity.
double kolodziejRatio(const RadialDensity& density, double q, int n, int M = 256);

/// Solves the barrier for density 4^n n! g^n and checks
/// tr(G'(z, D^2 u) D^2 rho) >= g(|z|) - 1e-6 on grid points with |z| >= 1/M.
Report barrierInequalityCheck(const Operator& op, const ScalarField& u, const RadialDensity& g,
                              const GridDomain& grid, int M = 512);

}  // namespace hessianlab
