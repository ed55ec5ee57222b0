#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hessianlab/hermitian.hpp"
#include "hessianlab/report.hpp"

namespace hessianlab {

/// Positive definite Hermitian background B(z) against which eigenvalues are taken.
class BackgroundForm {
 public:
  using Sampler = std::function<Matrix(const Point&)>;

  /// Empty form; factories taking a background substitute Id for it.
  BackgroundForm() = default;

  static BackgroundForm identity(int n);
  /// Constant background; throws NotPositiveDefinite unless b > 0.
  static BackgroundForm constant(const Matrix& b);
  /// z-dependent background. Positivity is enforced at every evaluation.
  static BackgroundForm varying(int n, Sampler sampler);

  int dim() const { return n_; }
  bool isIdentity() const { return kind_ == Kind::Identity; }
  bool isConstant() const { return kind_ != Kind::Varying; }

  Matrix at(const Point& z) const;
  /// eigenvalues(A, B(z)); skips the reduction when B = Id.
  SpectrumVector spectrum(const Point& z, const Matrix& a) const;
  /// Cholesky factor of B(z).
  Matrix::Dense factor(const Point& z) const;

 private:
  enum class Kind { Identity, Constant, Varying };
  BackgroundForm(int n, Kind kind, Sampler sampler, Matrix constant);

  int n_ = 0;
  Kind kind_ = Kind::Identity;
  Sampler sampler_;
  Matrix constant_;
};

enum class Membership { Inside, Outside, Indeterminate };

std::string_view label(Membership m);

/// Scale-normalized defining quantities below this magnitude are treated as
/// lying on the cone boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Family z -> Gamma(z) of open convex cones, each defined by finitely many
/// strict inequalities on the eigenvalues relative to the background.
class ConeFamily {
 public:
  enum class Kind { PositiveCone, GammaM, MMonge, Interp, Whole, Custom };

  /// Maps sorted eigenvalues to the defining quantities, each already divided
  /// by the matching power of max|lambda_i| (so the result is scale-free).
  using DefiningQuantities = std::function<std::vector<double>(const Vector&)>;

  static ConeFamily positive(int n, BackgroundForm background = {});
  static ConeFamily gammaM(int n, int m, BackgroundForm background = {});
  static ConeFamily mMonge(int n, int m, BackgroundForm background = {});
  /// Interpolating cone {lambda_1 + a lambda_2 > 0, lambda_2 + a lambda_1 > 0}; n = 2 only.
  static ConeFamily interp(double a, BackgroundForm background = {});
  static ConeFamily whole(int n, BackgroundForm background = {});
  /// Cone given by a user-supplied predicate on the eigenvalues; the entry
  /// point for hyperbolic-polynomial cones.
  static ConeFamily custom(int n, std::string name, DefiningQuantities quantities,
                           BackgroundForm background = {});

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int m() const { return m_; }
  double a() const { return a_; }
  const std::string& name() const { return name_; }
  const BackgroundForm& background() const { return background_; }

  std::vector<double> definingQuantities(const Vector& lambda) const;
  /// Smallest defining quantity (+inf for the whole space).
  double margin(const Vector& lambda) const;
  Membership classify(const Vector& lambda) const;
  Membership classify(const Point& z, const Matrix& a) const;
  /// True only for Inside; boundary (Indeterminate) cases do not pass.
  bool contains(const Point& z, const Matrix& a) const;

 private:
  ConeFamily() = default;
  Kind kind_ = Kind::Whole;
  int n_ = 0;
  int m_ = 0;
  double a_ = 0;
  std::string name_;
  DefiningQuantities custom_;
  BackgroundForm background_;
};

/// Random Hermitian whose eigenvalues relative to B(z) are drawn uniformly
/// in [lo, hi] (A = L U^* diag U L^* with B(z) = L L^*).
Matrix randomRelativeTo(const BackgroundForm& bg, const Point& z, std::mt19937_64& rng, double lo, double hi);

/// Rejection-samples A with classify(z, A) Inside and margin >= minMargin.
/// Half of the draws use a positive spectrum, half straddle zero.
Matrix sampleInCone(const ConeFamily& cone, const Point& z, std::mt19937_64& rng, double minMargin = 1e-6);

Report checkUnitaryInvariance(const ConeFamily& cone, std::size_t samples, std::uint64_t seed);
Report checkConvexity(const ConeFamily& cone, std::size_t samples, std::uint64_t seed);

Point origin(int n);

}  // namespace hessianlab
