#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hessianlab/cones.hpp"
#include "hessianlab/hermitian.hpp"
#include "hessianlab/report.hpp"

namespace hessianlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using MatrixField = std::function<Matrix(const Point&)>;
using RealField = std::function<double(const Point&)>;

/// z -> (a^{i bar j}(z)), the coefficients of a linear operator sum a^{i bar j} h_{i bar j}.
struct CoefficientField {
  int n = 0;
  MatrixField sampler;

  Matrix at(const Point& z) const { return sampler(z); }
  /// sum_{i,j} a^{i bar j}(z) h_{i bar j}(z)
  double apply(const Point& z, const Matrix& hessian) const { return traceProduct(at(z), hessian); }
};

/// Normalized operator G(z, A) = Fhat(lambda(z, A))^{1/k} / delta on the cone,
/// -inf off the cone.
class Operator {
 public:
  enum class Kind { MongeAmpere, SigmaM, MMongeAmpere, Interp, HessianQuotient, Linear, Combination };

  static Operator mongeAmpere(int n, BackgroundForm background = {});
  static Operator sigmaM(int n, int m, BackgroundForm background = {});
  static Operator mMongeAmpere(int n, int m, BackgroundForm background = {});
  static Operator interp(double a, BackgroundForm background = {});
  static Operator hessianQuotient(int n, int m, int l, BackgroundForm background = {});
  /// G(z, A) = tr(a(z) A) on all of H^n.
  static Operator linear(CoefficientField coefficients, std::string name = "linear");
  /// G(z, A) = sum_i w_i(z) G_i(z, A) with w_i >= 0 and sum w_i = 1 at every z
  /// (checked where evaluated). All members must share dimension and background.
  static Operator combination(std::vector<RealField> weights, std::vector<Operator> members);

  /// Same operator with a different normalization constant.
  Operator withDelta(double delta) const;

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int m() const { return m_; }
  int l() const { return l_; }
  double a() const { return a_; }
  double degree() const { return degree_; }
  double delta() const { return delta_; }
  const ConeFamily& cone() const { return cone_; }
  const std::string& name() const { return name_; }
  /// True for operators defined through eigenvalues only.
  bool isHessianType() const;

  /// Fhat(lambda): the un-normalized symmetric function of the eigenvalues.
  double rawValue(const Vector& lambda) const;
  double evaluate(const Point& z, const Matrix& a) const;
  /// F = (delta G)^k, the operator before normalization.
  double unnormalized(const Point& z, const Matrix& a) const;

  /// G^{i bar j}(z, A): the Hermitian M with d/dt G(z, A + tH) = tr(M H).
  /// Throws OnConeBoundary unless A is inside the cone with margin > 1e-10.
  Matrix gradient(const Point& z, const Matrix& a) const;
  /// Hermitian-structured central differences with one Richardson level.
  Matrix numericGradient(const Point& z, const Matrix& a) const;
  /// dG/dlambda_i at a spectrum inside the cone (Hessian-type operators).
  Vector spectralDerivative(const Vector& lambda) const;

  Json describe() const;

 private:
  Operator() = default;
  double fromSpectrum(const Vector& lambda) const;
  void requireInterior(const Point& z, const Matrix& a) const;

  Kind kind_ = Kind::MongeAmpere;
  int n_ = 0;
  int m_ = 0;
  int l_ = 0;
  double a_ = 0;
  double degree_ = 1;
  double delta_ = 1;
  std::string name_;
  ConeFamily cone_ = ConeFamily::whole(2);
  CoefficientField coefficients_;
  std::shared_ptr<const std::vector<RealField>> weights_;
  std::shared_ptr<const std::vector<Operator>> members_;
};

/// Margin (scale-normalized) required before a gradient is taken.
inline constexpr double kGradientMargin = 1e-10;

// Axiom checks. Each sample i draws from mixSeed(seed, i); sample points z
// lie in the unit ball when the background varies, at the origin otherwise.
Report checkHomogeneity(const Operator& op, std::size_t samples, const std::vector<double>& scales,
                        std::uint64_t seed);
Report checkConcavity(const Operator& op, std::size_t samples, std::uint64_t seed);
Report checkLinearizedInequality(const Operator& op, std::size_t samples, std::uint64_t seed);
/// Both G(z,P) >= det(P)^{1/n} and G(z,A+P) >= G(z,A) + det(P)^{1/n}. The
/// probes are always tested in addition to the random samples.
Report checkComparison(const Operator& op, std::size_t samples, std::uint64_t seed,
                       const std::vector<Matrix>& probes = {});
Report checkEulerIdentity(const Operator& op, std::size_t samples, std::uint64_t seed);
Report checkEllipticity(const Operator& op, std::size_t samples, std::uint64_t seed);
/// G(z, Id) >= 1 (equality expected for the built-in normalized operators).
Report checkNormalization(const Operator& op);

/// Known comparison counterexamples for the operator (diag(64, 1, ..., 1) for
/// Hessian quotients); empty otherwise.
std::vector<Matrix> comparisonProbes(const Operator& op);

/// Full suite: homogeneity, concavity, linearized inequality, comparison
/// (both forms), Euler identity, ellipticity, normalization. The comparison
/// report of a Hessian quotient is marked expect-fail, and so is its
/// normalization report when C(n, m) < C(n, l).
std::vector<Report> verifyAxioms(const Operator& op, std::size_t samples, std::uint64_t seed);

/// z -> gradient(op, z, hessian(z)). Throws OnConeBoundary with the location.
CoefficientField linearize(const Operator& op, MatrixField hessian);
/// Linearization of the plain determinant: a^{i bar j} = d det / d a_{i bar j} (D^2u).
CoefficientField linearizeDeterminant(int n, MatrixField hessian);

double binomial(int n, int k);

}  // namespace hessianlab
