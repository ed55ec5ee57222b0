#include "hessianlab/testfields.hpp"

#include <cmath>
#include <numbers>

namespace hessianlab {

double Ball::volume() const {
  const int n = static_cast<int>(center.size());
  return std::pow(std::numbers::pi, n) * std::pow(radius, 2 * n) / std::tgamma(n + 1.0);
}

double zPrimeNorm(const Point& z) { return z.tail(z.size() - 1).norm(); }

Matrix ScalarField::hessian(const Point& z) const {
  if (!exactHessian) throw Error(ErrorCode::InvalidArgument, id + " has no closed-form Hessian");
  requireSameDimension(static_cast<int>(z.size()), n);
  if (singular == SingularSet::ZPrimeZero && zPrimeNorm(z) == 0) {
    throw Error(ErrorCode::SingularPoint, id + ": Hessian requested on {z' = 0}");
  }
  return exactHessian(z);
}

namespace {

using Complex = std::complex<double>;

ScalarField base(std::string id, int n) {
  requireDimension(n);
  ScalarField f;
  f.id = std::move(id);
  f.n = n;
  f.domain = Ball::unit(n);
  return f;
}

// Complex Hessian of V(||z'||^2) in the z' block: V' delta_jk + V'' bar w_j w_k.
Matrix::Dense radialBlock(const Point& z, double v1, double v2) {
  const int n = static_cast<int>(z.size());
  Matrix::Dense h = Matrix::Dense::Zero(n, n);
  for (int j = 1; j < n; ++j)
    for (int k = 1; k < n; ++k) h(j, k) = (j == k ? v1 : 0.0) + v2 * std::conj(z(j)) * z(k);
  return h;
}

}  // namespace

ScalarField pogorelovU(int n) {
  ScalarField f = base("pogorelov_u", n);
  const double alpha = 1 - 1.0 / n;
  f.singular = SingularSet::ZPrimeZero;
  f.value = [alpha](const Point& z) {
    const double s = z.tail(z.size() - 1).squaredNorm();
    return std::pow(s, alpha) * (1 + std::norm(z(0)));
  };
  f.exactHessian = [alpha](const Point& z) {
    const double s = z.tail(z.size() - 1).squaredNorm();
    const double h = 1 + std::norm(z(0));
    const double d1 = alpha * std::pow(s, alpha - 1);
    const double d2 = alpha * (alpha - 1) * std::pow(s, alpha - 2);
    Matrix::Dense m = radialBlock(z, d1, d2) * h;
    m(0, 0) = std::pow(s, alpha);
    for (int k = 1; k < z.size(); ++k) {
      m(0, k) = d1 * z(k) * std::conj(z(0));
      m(k, 0) = std::conj(m(0, k));
    }
    return Matrix::fromLower(m);
  };
  f.metadata["sobolev"] = "W^{2,r}_loc for 1 <= r < " + std::to_string(n * (n - 1));
  f.metadata["sobolev_r_bound"] = n * (n - 1);
  f.metadata["hessian_cone"] = "positive definite off {z' = 0}";
  return f;
}

ScalarField pogorelovF(int n) {
  ScalarField f = base("pogorelov_f", n);
  const double c = std::pow(1 - 1.0 / n, n);
  f.value = [c, n](const Point& z) { return c * std::pow(1 + std::norm(z(0)), n - 2); };
  return f;
}

ScalarField phiR(int n, double R) {
  if (n < 3) throw Error(ErrorCode::InvalidDimension, "phi_R needs n >= 3");
  if (!(R > 0)) throw Error(ErrorCode::InvalidArgument, "phi_R needs R > 0");
  ScalarField f = base("phi_R", n);
  f.domain = Ball{Point::Zero(n), R};
  f.singular = SingularSet::ZPrimeZero;
  const double alpha = 1 - 1.0 / n;
  const double c = 1 + R * R;
  f.value = [alpha, c](const Point& z) {
    const double s = z.tail(z.size() - 1).squaredNorm();
    return std::pow(s, alpha) * (c - s);
  };
  // psi(s) = c s^alpha - s^{alpha+1}
  f.exactHessian = [alpha, c](const Point& z) {
    const double s = z.tail(z.size() - 1).squaredNorm();
    const double d1 = c * alpha * std::pow(s, alpha - 1) - (alpha + 1) * std::pow(s, alpha);
    const double d2 = c * alpha * (alpha - 1) * std::pow(s, alpha - 2) - (alpha + 1) * alpha * std::pow(s, alpha - 1);
    return Matrix::fromLower(radialBlock(z, d1, d2));
  };
  f.metadata["R"] = R;
  f.metadata["sobolev"] = "W^{2,r}_loc(B_R) for " + std::to_string(n) + " < r < " + std::to_string(n * (n - 1));
  return f;
}

ScalarField quadratic(int n) {
  ScalarField f = base("quadratic", n);
  f.value = [](const Point& z) { return z.squaredNorm(); };
  f.exactHessian = [n](const Point&) { return Matrix::identity(n); };
  return f;
}

ScalarField pluriharmonic(int n) {
  ScalarField f = base("pluriharmonic", n);
  f.value = [](const Point& z) { return std::real(z(0) * z(0)); };
  f.exactHessian = [n](const Point&) { return Matrix::zero(n); };
  return f;
}

ScalarField perturbedQuadratic(int n, double kappa) {
  ScalarField f = base("perturbed_quadratic", n);
  f.value = [kappa](const Point& z) {
    const double a = std::norm(z(0));
    return z.squaredNorm() + 0.5 * std::real(z(0) * z(0)) + kappa * a * a;
  };
  f.exactHessian = [n, kappa](const Point& z) {
    Vector d = Vector::Ones(n);
    d(0) += 4 * kappa * std::norm(z(0));
    return Matrix::diagonal(d);
  };
  f.metadata["kappa"] = kappa;
  return f;
}

ScalarField weightedQuadratic(const Vector& weights) {
  const int n = static_cast<int>(weights.size());
  ScalarField f = base("weighted_quadratic", n);
  f.value = [weights](const Point& z) {
    double s = 0;
    for (int i = 0; i < z.size(); ++i) s += weights(i) * std::norm(z(i));
    return s;
  };
  f.exactHessian = [weights](const Point&) { return Matrix::diagonal(weights); };
  f.metadata["weights"] = toJson(weights);
  return f;
}

ScalarField realPart(int n) {
  ScalarField f = base("re_z1", n);
  f.value = [](const Point& z) { return z(0).real(); };
  f.exactHessian = [n](const Point&) { return Matrix::zero(n); };
  return f;
}

ScalarField negQuadratic(int n) {
  ScalarField f = base("neg_quadratic", n);
  f.value = [](const Point& z) { return -z.squaredNorm(); };
  f.exactHessian = [n](const Point&) { return Matrix::identity(n) * -1.0; };
  return f;
}

ScalarField saddle(int n) {
  ScalarField f = base("saddle", n);
  f.value = [](const Point& z) { return std::norm(z(0)) - std::norm(z(1)); };
  f.exactHessian = [n](const Point&) {
    Vector d = Vector::Zero(n);
    d(0) = 1;
    d(1) = -1;
    return Matrix::diagonal(d);
  };
  return f;
}

ScalarField mixedProduct(int n) {
  ScalarField f = base("mixed_product", n);
  f.value = [](const Point& z) { return std::real(z(0) * std::conj(z(1))); };
  f.exactHessian = [n](const Point&) {
    Matrix::Dense m = Matrix::Dense::Zero(n, n);
    m(1, 0) = 0.5;
    return Matrix::fromLower(m);
  };
  return f;
}

ScalarField affine(const ScalarField& u, double t, double c) {
  ScalarField f = u;
  f.value = [v = u.value, t, c](const Point& z) { return t * v(z) + c; };
  if (u.exactHessian) f.exactHessian = [h = u.exactHessian, t](const Point& z) { return h(z) * t; };
  f.metadata["scale"] = t;
  f.metadata["shift"] = c;
  return f;
}

ScalarField fieldById(const std::string& id, int n, double R) {
  if (id == "pogorelov_u") return pogorelovU(n);
  if (id == "pogorelov_f") return pogorelovF(n);
  if (id == "phi_R") return phiR(n, R);
  if (id == "quadratic") return quadratic(n);
  if (id == "pluriharmonic") return pluriharmonic(n);
  if (id == "perturbed_quadratic") return perturbedQuadratic(n);
  if (id == "re_z1") return realPart(n);
  if (id == "neg_quadratic") return negQuadratic(n);
  if (id == "saddle") return saddle(n);
  if (id == "mixed_product") return mixedProduct(n);
  throw Error(ErrorCode::InvalidArgument, "unknown field '" + id + "'");
}

double defaultStep(const Point& z) { return 1e-4 * (1 + z.norm()); }

Matrix fdHessian(const ScalarField& u, const Point& z, std::optional<double> step) {
  const int n = u.n;
  requireSameDimension(static_cast<int>(z.size()), n);
  const double h = step.value_or(defaultStep(z));
  if (u.singular == SingularSet::ZPrimeZero && zPrimeNorm(z) < 10 * h) {
    throw Error(ErrorCode::TooCloseToSingularity, u.id + ": ||z'|| < 10 h");
  }
  // Real coordinate a: index a / 2, real part when a is even.
  auto unit = [&](int a) {
    Point e = Point::Zero(n);
    e(a / 2) = (a % 2 == 0) ? Complex(1, 0) : Complex(0, 1);
    return e;
  };
  const int d = 2 * n;
  Eigen::MatrixXd second(d, d);
  const double u0 = u(z);
  for (int a = 0; a < d; ++a) {
    const Point ea = unit(a) * h;
    second(a, a) = (u(z + ea) - 2 * u0 + u(z - ea)) / (h * h);
    for (int b = 0; b < a; ++b) {
      const Point eb = unit(b) * h;
      const double v = (u(z + ea + eb) - u(z + ea - eb) - u(z - ea + eb) + u(z - ea - eb)) / (4 * h * h);
      second(a, b) = second(b, a) = v;
    }
  }
  Matrix::Dense m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
      m(j, k) = 0.25 * Complex(second(xj, xk) + second(yj, yk), second(xj, yk) - second(yj, xk));
    }
  }
  return Matrix::symmetrized(m);
}

}  // namespace hessianlab
