#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hessianlab/hermitian.hpp"
#include "hessianlab/report.hpp"

namespace hessianlab {

struct Ball {
  Point center;
  double radius = 1;

  static Ball unit(int n) { return {Point::Zero(n), 1.0}; }
  bool contains(const Point& z) const { return (z - center).norm() < radius; }
  /// Lebesgue volume pi^n R^{2n} / n! of the ball in C^n = R^{2n}.
  double volume() const;
};

enum class SingularSet { None, ZPrimeZero };

/// ||z'|| with z = (z_1, z').
double zPrimeNorm(const Point& z);

/// Real-valued function on a region of C^n with an optional closed-form
/// complex Hessian (entry (j, k) = d^2 u / dz_j d bar z_k).
struct ScalarField {
  std::string id;
  int n = 0;
  std::function<double(const Point&)> value;
  std::function<Matrix(const Point&)> exactHessian;
  Ball domain;
  SingularSet singular = SingularSet::None;
  Json metadata = Json::object();

  double operator()(const Point& z) const { return value(z); }
  bool hasExactHessian() const { return static_cast<bool>(exactHessian); }
  /// Exact Hessian; throws SingularPoint on the singular set.
  Matrix hessian(const Point& z) const;
};

/// ||z'||^{2(1 - 1/n)} (1 + |z_1|^2), smooth off {z' = 0}.
ScalarField pogorelovU(int n);
/// (1 - 1/n)^n (1 + |z_1|^2)^{n-2}, the Monge-Ampere density of pogorelovU.
ScalarField pogorelovF(int n);
/// ||z'||^{2(1 - 1/n)} (1 + R^2 - ||z'||^2) on B_R(0); depends on z' only.
ScalarField phiR(int n, double R);
/// ||z||^2
ScalarField quadratic(int n);
/// Re(z_1^2)
ScalarField pluriharmonic(int n);
/// ||z||^2 + Re(z_1^2)/2 + kappa |z_1|^4; Hessian Id + diag(4 kappa |z_1|^2, 0, ...).
ScalarField perturbedQuadratic(int n, double kappa = 0.5);
/// sum_i w_i |z_i|^2
ScalarField weightedQuadratic(const Vector& weights);
/// Re(z_1)
ScalarField realPart(int n);
/// -||z||^2
ScalarField negQuadratic(int n);
/// |z_1|^2 - |z_2|^2
ScalarField saddle(int n);
/// Re(z_1 bar z_2)
ScalarField mixedProduct(int n);

/// t u + c
ScalarField affine(const ScalarField& u, double t, double c);

/// Field lookup for the command line: "pogorelov_u", "pogorelov_f",
/// "phi_R", "quadratic", "pluriharmonic" (plus the other corpus members).
ScalarField fieldById(const std::string& id, int n, double R = 0.5);

/// Default oracle step 1e-4 (1 + ||z||).
double defaultStep(const Point& z);

/// Central-difference complex Hessian in real coordinates:
/// u_{j bar k} = 1/4 [(u_{x_j x_k} + u_{y_j y_k}) + i (u_{x_j y_k} - u_{y_j x_k})].
/// Throws TooCloseToSingularity within 10 h of the singular set.
Matrix fdHessian(const ScalarField& u, const Point& z, std::optional<double> h = std::nullopt);

}  // namespace hessianlab
