#pragma once

// Dense Hermitian matrices of small dimension (2 <= n <= 8), generalized
// eigenvalues with respect to a positive definite background, elementary
// symmetric polynomials, and the exact gradient of the determinant.
//
// All storage uses Eigen matrices with a compile-time maximum size, so none of
// the routines below allocate on the heap.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include "hessianlab/error.hpp"

namespace hessianlab {

inline constexpr int kMaxDim = 8;
inline constexpr int kMinDim = 2;

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

inline void requireDimension(int n) {
  if (n < kMinDim || n > kMaxDim) {
    throw Error(ErrorCode::InvalidDimension,
                "dimension " + std::to_string(n) + " outside [2, 8]");
  }
}

inline void requireSameDimension(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a) + " vs " + std::to_string(b));
  }
}

/// Hermitian matrix with exact conjugate symmetry.
///
/// Every constructor writes the upper triangle as the conjugate of the lower
/// one and zeroes the imaginary part of the diagonal, so `(i, j)` and `(j, i)`
/// are conjugate bit-for-bit.
template <typename Scalar>
class Hermitian {
 public:
  using Complex = std::complex<Scalar>;
  using Dense = DenseMatrix<Scalar>;

  Hermitian() = default;

  /// Builds from the lower triangle of `m` (the strict upper part is ignored).
  template <typename Derived>
  static Hermitian fromLower(const Eigen::MatrixBase<Derived>& m) {
    requireSameDimension(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    const int n = static_cast<int>(m.rows());
    requireDimension(n);
    Dense out(n, n);
    for (int j = 0; j < n; ++j) {
      out(j, j) = Complex(std::real(Complex(m(j, j))), Scalar(0));
      for (int i = j + 1; i < n; ++i) {
        out(i, j) = Complex(m(i, j));
        out(j, i) = std::conj(out(i, j));
      }
    }
    if (!out.allFinite()) {
      throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
    }
    return Hermitian(std::move(out));
  }

  /// Hermitian part (M + M^*) / 2.
  template <typename Derived>
  static Hermitian symmetrized(const Eigen::MatrixBase<Derived>& m) {
    Dense d = m.template cast<Complex>();
    Dense sym = (d + d.adjoint()) * Scalar(0.5);
    return fromLower(sym);
  }

  static Hermitian identity(int n) {
    requireDimension(n);
    return Hermitian(Dense::Identity(n, n));
  }

  static Hermitian zero(int n) {
    requireDimension(n);
    return Hermitian(Dense::Zero(n, n));
  }

  template <typename Derived>
  static Hermitian diagonal(const Eigen::MatrixBase<Derived>& d) {
    const int n = static_cast<int>(d.size());
    requireDimension(n);
    Dense out = Dense::Zero(n, n);
    for (int i = 0; i < n; ++i) out(i, i) = Complex(Scalar(d(i)), Scalar(0));
    return fromLower(out);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Dense& dense() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  Scalar trace() const { return std::real(m_.trace()); }
  Scalar frobeniusNorm() const { return m_.norm(); }

  Hermitian operator+(const Hermitian& o) const {
    requireSameDimension(dim(), o.dim());
    return fromLower(m_ + o.m_);
  }
  Hermitian operator-(const Hermitian& o) const {
    requireSameDimension(dim(), o.dim());
    return fromLower(m_ - o.m_);
  }
  Hermitian operator-() const { return fromLower(-m_); }
  Hermitian operator*(Scalar t) const { return fromLower(m_ * t); }
  friend Hermitian operator*(Scalar t, const Hermitian& h) { return h * t; }

  /// Conjugation U^* H U.
  template <typename Derived>
  Hermitian congruence(const Eigen::MatrixBase<Derived>& u) const {
    Dense c = u.adjoint() * m_ * u;
    return fromLower(c);
  }

  bool operator==(const Hermitian& o) const { return dim() == o.dim() && m_ == o.m_; }

 private:
  explicit Hermitian(Dense m) : m_(std::move(m)) {}
  Dense m_;
};

/// Re tr(A B), the real pairing sum_{i,j} a_{ij} b_{ji}.
template <typename Scalar>
Scalar traceProduct(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b) {
  requireSameDimension(a.dim(), b.dim());
  Scalar s(0);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += std::real(a(i, j) * b(j, i));
  return s;
}

/// Eigenvalues sorted ascending.
template <typename Scalar>
struct Spectrum {
  RealVector<Scalar> values;

  int size() const { return static_cast<int>(values.size()); }
  Scalar operator[](int i) const { return values(i); }
  Scalar min() const { return values(0); }
  Scalar max() const { return values(values.size() - 1); }
};

/// Eigenpairs; columns of `vectors` are B-orthonormal (V^* B V = I).
template <typename Scalar>
struct EigenDecomposition {
  Spectrum<Scalar> spectrum;
  DenseMatrix<Scalar> vectors;
};

inline constexpr double kPivotTolerance = 1e-12;

/// Lower-triangular L with B = L L^*. Throws NotPositiveDefinite when a pivot
/// drops to `pivotTolerance` or below.
template <typename Scalar>
DenseMatrix<Scalar> choleskyLower(const Hermitian<Scalar>& b,
                                  Scalar pivotTolerance = Scalar(kPivotTolerance)) {
  using Complex = std::complex<Scalar>;
  const int n = b.dim();
  DenseMatrix<Scalar> l = DenseMatrix<Scalar>::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    Scalar d = std::real(b(j, j));
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > pivotTolerance)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(static_cast<double>(d)) + " at column " +
                      std::to_string(j));
    }
    const Scalar ljj = std::sqrt(d);
    l(j, j) = Complex(ljj, 0);
    for (int i = j + 1; i < n; ++i) {
      Complex s = b(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

namespace detail {

template <typename Scalar>
void sortEigenpairs(RealVector<Scalar>& values, DenseMatrix<Scalar>& vectors) {
  const int n = static_cast<int>(values.size());
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int a, int b) { return values(a) < values(b); });
  RealVector<Scalar> sortedValues(n);
  DenseMatrix<Scalar> sortedVectors(vectors.rows(), n);
  for (int k = 0; k < n; ++k) {
    sortedValues(k) = values(order[k]);
    sortedVectors.col(k) = vectors.col(order[k]);
  }
  values = sortedValues;
  vectors = sortedVectors;
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver for a Hermitian matrix.
template <typename Scalar>
EigenDecomposition<Scalar> jacobiEigen(const Hermitian<Scalar>& h, bool wantVectors = true) {
  using Complex = std::complex<Scalar>;
  const int n = h.dim();
  DenseMatrix<Scalar> a = h.dense();
  DenseMatrix<Scalar> v;
  if (wantVectors) v = DenseMatrix<Scalar>::Identity(n, n);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar scale = a.norm();
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0; ++sweep) {
    Scalar off(0);
    for (int q = 1; q < n; ++q)
      for (int p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(off) <= eps * scale * Scalar(1e-2)) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Scalar mag = std::abs(a(p, q));
        if (mag == Scalar(0)) continue;
        const Complex phase = a(p, q) / mag;
        const Scalar theta = (std::real(a(q, q)) - std::real(a(p, p))) / (Scalar(2) * mag);
        Scalar t;
        if (std::isinf(theta * theta)) {
          t = Scalar(0.5) / theta;
        } else {
          t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
              (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        }
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        // J restricted to (p, q): [[c, s], [-s conj(phase), c conj(phase)]].
        const Complex jpp(c, 0);
        const Complex jpq(s, 0);
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = Complex(0);
        a(q, p) = Complex(0);
        a(p, p) = Complex(std::real(a(p, p)), 0);
        a(q, q) = Complex(std::real(a(q, q)), 0);
        if (wantVectors) {
          for (int k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = vkp * jpp + vkq * jqp;
            v(k, q) = vkp * jpq + vkq * jqq;
          }
        }
      }
    }
  }

  RealVector<Scalar> values(n);
  for (int i = 0; i < n; ++i) values(i) = std::real(a(i, i));
  if (!wantVectors) {
    std::sort(values.data(), values.data() + n);
    return {Spectrum<Scalar>{values}, DenseMatrix<Scalar>()};
  }
  detail::sortEigenpairs(values, v);
  return {Spectrum<Scalar>{values}, v};
}

/// Generalized eigenpairs of det(A - lambda B) = 0 via B = L L^*, then Jacobi
/// on L^{-1} A L^{-*}.
template <typename Scalar>
EigenDecomposition<Scalar> generalizedEigen(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b,
                                            bool wantVectors = true) {
  requireSameDimension(a.dim(), b.dim());
  const DenseMatrix<Scalar> l = choleskyLower(b);
  const auto lower = l.template triangularView<Eigen::Lower>();
  DenseMatrix<Scalar> x = lower.solve(a.dense());                  // L^{-1} A
  DenseMatrix<Scalar> c = lower.solve(x.adjoint().eval()).adjoint();  // L^{-1} A L^{-*}
  auto eig = jacobiEigen(Hermitian<Scalar>::symmetrized(c), wantVectors);
  if (wantVectors) {
    eig.vectors = l.adjoint().template triangularView<Eigen::Upper>().solve(eig.vectors);
  }
  return eig;
}

template <typename Scalar>
Spectrum<Scalar> eigenvalues(const Hermitian<Scalar>& a) {
  return jacobiEigen(a, false).spectrum;
}

template <typename Scalar>
Spectrum<Scalar> eigenvalues(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b) {
  return generalizedEigen(a, b, false).spectrum;
}

/// All sigma_0 .. sigma_n of `lambda` by incremental expansion of prod (1 + lambda_i t).
template <typename Scalar>
using SigmaVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim + 1, 1>;

template <typename Derived>
SigmaVector<typename Derived::Scalar> elementarySymmetricAll(const Eigen::MatrixBase<Derived>& lambda) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(lambda.size());
  SigmaVector<Scalar> e = SigmaVector<Scalar>::Zero(n + 1);
  e(0) = Scalar(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j >= 1; --j) e(j) += lambda(i) * e(j - 1);
  return e;
}

template <typename Derived>
typename Derived::Scalar elementarySymmetric(const Eigen::MatrixBase<Derived>& lambda, int q) {
  const int n = static_cast<int>(lambda.size());
  if (q < 0 || q > n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "sigma_" + std::to_string(q) + " requested for n = " + std::to_string(n));
  }
  using Scalar = typename Derived::Scalar;
  std::array<Scalar, kMaxDim + 1> e{};
  e[0] = Scalar(1);
  for (int i = 0; i < n; ++i)
    for (int j = std::min(i + 1, q); j >= 1; --j) e[j] += lambda(i) * e[j - 1];
  return e[q];
}

template <typename Scalar>
Scalar elementarySymmetric(const Spectrum<Scalar>& lambda, int q) {
  return elementarySymmetric(lambda.values, q);
}

template <typename Scalar>
Scalar determinant(const Hermitian<Scalar>& a) {
  return std::real(a.dense().fullPivLu().determinant());
}

/// Exact gradient of det at A, i.e. the adjugate: d/dt det(A + tH) at t = 0
/// equals traceProduct(gradDeterminant(A), H). Built from cofactors, so it is
/// valid for singular A as well.
template <typename Scalar>
Hermitian<Scalar> gradDeterminant(const Hermitian<Scalar>& a) {
  using Complex = std::complex<Scalar>;
  const int n = a.dim();
  DenseMatrix<Scalar> adj(n, n);
  DenseMatrix<Scalar> minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      // adj(i, j) = (-1)^{i+j} det(A without row j and column i)
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      Complex cof = minor.size() == 1 ? minor(0, 0) : minor.fullPivLu().determinant();
      if ((i + j) % 2 == 1) cof = -cof;
      adj(i, j) = cof;
    }
  }
  return Hermitian<Scalar>::fromLower(adj);
}

/// Haar-distributed unitary: QR of an i.i.d. standard complex Gaussian matrix
/// with the phases of diag(R) divided out.
template <typename Scalar, typename Rng>
DenseMatrix<Scalar> randomUnitary(int n, Rng& rng) {
  using Complex = std::complex<Scalar>;
  requireDimension(n);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  DenseMatrix<Scalar> z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = Complex(Scalar(re), Scalar(im));
    }
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(z);
  DenseMatrix<Scalar> q = qr.householderQ() * DenseMatrix<Scalar>::Identity(n, n);
  const DenseMatrix<Scalar>& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Scalar m = std::abs(r(j, j));
    if (m > 0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

/// U^* diag(lambda) U with lambda uniform in [lo, hi] and U Haar unitary.
template <typename Scalar, typename Rng>
Hermitian<Scalar> randomHermitian(int n, Rng& rng, Scalar lo, Scalar hi) {
  std::uniform_real_distribution<double> uniform(static_cast<double>(lo), static_cast<double>(hi));
  RealVector<Scalar> lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = lo == hi ? lo : Scalar(uniform(rng));
  const DenseMatrix<Scalar> u = randomUnitary<Scalar>(n, rng);
  return Hermitian<Scalar>::diagonal(lambda).congruence(u);
}

template <typename Scalar = double>
Hermitian<Scalar> randomHermitian(int n, std::uint64_t seed, Scalar lo, Scalar hi) {
  std::mt19937_64 rng(seed);
  return randomHermitian<Scalar>(n, rng, lo, hi);
}

using Matrix = Hermitian<double>;
using Point = ComplexVector<double>;
using Vector = RealVector<double>;
using SpectrumVector = Spectrum<double>;

}  // namespace hessianlab
