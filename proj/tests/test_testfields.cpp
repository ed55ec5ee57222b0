#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hessianlab/grid.hpp"
#include "hessianlab/testfields.hpp"
#include "test_support.hpp"

using namespace hessianlab;
using hessianlab::testing::point;
using hessianlab::testing::SampleRng;

namespace {

using C = std::complex<double>;

// Independent oracle: fourth-order stencils in real coordinates, combined as
// u_{j bar k} = 1/4 [(u_{x_j x_k} + u_{y_j y_k}) + i (u_{x_j y_k} - u_{y_j x_k})].
Matrix hessianOracle(const ScalarField& u, const Point& z, double h) {
  const int n = static_cast<int>(z.size());
  auto shift = [&](int coord, double t) {
    Point e = Point::Zero(n);
    e(coord / 2) = coord % 2 == 0 ? C(t, 0) : C(0, t);
    return e;
  };
  auto second = [&](int p, int q) {
    const double w[4] = {-1, 8, -8, 1};
    const double s[4] = {2, 1, -1, -2};
    double acc = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) acc += w[a] * w[b] * u(z + shift(p, s[a] * h) + shift(q, s[b] * h));
    return acc / (144 * h * h);
  };
  Matrix::Dense m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double xx = second(2 * j, 2 * k), yy = second(2 * j + 1, 2 * k + 1);
      const double xy = second(2 * j, 2 * k + 1), yx = second(2 * j + 1, 2 * k);
      m(j, k) = 0.25 * C(xx + yy, xy - yx);
    }
  return Matrix::symmetrized(m);
}

Point randomPoint(SampleRng& rng, int n, double radius, double minZPrime = 0) {
  for (;;) {
    Point z(n);
    for (int i = 0; i < n; ++i) z(i) = C(rng.uniform(-1, 1), rng.uniform(-1, 1));
    z *= radius / std::sqrt(static_cast<double>(2 * n));
    if (zPrimeNorm(z) >= minZPrime) return z;
  }
}

}  // namespace

TEST_CASE("Pogorelov u: worked values") {
  CHECK(pogorelovU(3)(point({0, 1, 0})) == doctest::Approx(1).epsilon(1e-15));
  CHECK(pogorelovU(3)(point({C(0, 1), 1, 0})) == doctest::Approx(2).epsilon(1e-15));
  for (double theta : {0.0, 1.0, 2.5}) {
    const double t = 0.37;
    CHECK(pogorelovU(2)(point({0, std::polar(t, theta)})) == doctest::Approx(t).epsilon(1e-14));
  }
  CHECK(pogorelovU(3)(point({0.5, 0, 0})) == 0);
  CHECK(pogorelovU(4).metadata["sobolev_r_bound"] == 12);
}

TEST_CASE("Pogorelov f: worked values") {
  CHECK(pogorelovF(3)(point({0, 0.3, 0.2})) == doctest::Approx(8.0 / 27).epsilon(1e-15));
  CHECK(pogorelovF(2)(point({C(3, 1), 0.5})) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(3 * pogorelovF(3)(point({1, 0, 0})) == doctest::Approx(48.0 / 27).epsilon(1e-15));
  const Point z = point({C(0.4, -0.2), 0.1, 0.3});
  CHECK(3 * pogorelovF(3)(z) == doctest::Approx(24.0 / 27 * (1 + std::norm(z(0)))).epsilon(1e-14));
}

TEST_CASE("phi_R: worked values") {
  const auto phi = phiR(3, 0.5);
  const Point z = point({C(0.1, 0.2), 0.3, 0});
  CHECK(phi(z) == doctest::Approx(std::pow(0.3, 4.0 / 3) * (1.25 - 0.09)).epsilon(1e-14));
  CHECK(phi(point({0.4, 0, 0})) == 0);
  CHECK(phi.domain.radius == 0.5);
  try {
    phiR(2, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDimension);
  }
}

TEST_CASE("exact Hessians match the fourth-order oracle on the whole corpus") {
  SampleRng rng(4);
  Vector w(3);
  w << 1, 2, 0.5;
  std::vector<ScalarField> fields = {pogorelovU(2), pogorelovU(3), pogorelovU(4),
                                     phiR(3, 0.5), phiR(4, 0.7), quadratic(3), pluriharmonic(2),
                                     perturbedQuadratic(3), weightedQuadratic(w), realPart(2), negQuadratic(2),
                                     saddle(3), mixedProduct(2), affine(pogorelovU(3), 2.5, -1)};
  for (const auto& f : fields) {
    REQUIRE(f.hasExactHessian());
    for (int t = 0; t < 20; ++t) {
      const Point z = randomPoint(rng, f.n, 0.9, 0.2);
      const Matrix exact = f.hessian(z);
      const Matrix oracle = hessianOracle(f, z, 1e-3);
      INFO(f.id, " at t = ", t);
      CHECK((exact - oracle).frobeniusNorm() < 1e-6 * (1 + exact.frobeniusNorm()));
    }
  }
}

TEST_CASE("Pogorelov: det(D^2 u) = f and D^2 u positive definite off z' = 0") {
  SampleRng rng(9);
  for (int n = 2; n <= 5; ++n) {
    const auto u = pogorelovU(n);
    const auto f = pogorelovF(n);
    for (int t = 0; t < 200; ++t) {
      const Point z = randomPoint(rng, n, 2.0, 1e-3);
      const Matrix h = u.hessian(z);
      CHECK(std::abs(determinant(h) / f(z) - 1) <= 1e-9);
      CHECK(eigenvalues(h).min() > 0);
    }
  }
}

TEST_CASE("phi_R is degenerate") {
  SampleRng rng(2);
  for (int n = 3; n <= 5; ++n) {
    const auto phi = phiR(n, 0.5);
    for (int t = 0; t < 50; ++t) CHECK(std::abs(determinant(phi.hessian(randomPoint(rng, n, 0.5, 1e-2)))) <= 1e-10);
  }
}

TEST_CASE("difference Hessian: worked examples") {
  const Point z = point({C(0.3, -0.7), C(1.1, 0.2)});
  CHECK((fdHessian(quadratic(2), z, 1e-3) - Matrix::identity(2)).frobeniusNorm() < 1e-6);
  CHECK(fdHessian(pluriharmonic(2), z, 1e-3).frobeniusNorm() < 1e-6);
  const Point p = point({0, 1, 0});
  CHECK((fdHessian(pogorelovU(3), p, 1e-4) - pogorelovU(3).hessian(p)).frobeniusNorm() < 1e-5);
  // Default step.
  CHECK(defaultStep(point({3, 4})) == doctest::Approx(6e-4));
  CHECK((fdHessian(saddle(2), z) - saddle(2).hessian(z)).frobeniusNorm() < 1e-6);
}

TEST_CASE("difference Hessian converges at order two") {
  SampleRng rng(13);
  for (const auto& f : {pogorelovU(3), perturbedQuadratic(2), phiR(3, 0.8), mixedProduct(3)}) {
    const Point z = randomPoint(rng, f.n, 0.8, 0.3);
    const Matrix exact = f.hessian(z);
    const double coarse = (fdHessian(f, z, 0.02) - exact).frobeniusNorm();
    const double fine = (fdHessian(f, z, 0.01) - exact).frobeniusNorm();
    INFO(f.id, " ", coarse, " ", fine);
    if (coarse < 1e-10) continue;  // exact for quadratics
    CHECK(hessianlab::testing::observedOrder(coarse, fine) >= 1.8);
  }
}

TEST_CASE("singular set handling") {
  const Point onSet = point({0.5, 0, 0});
  try {
    pogorelovU(3).hessian(onSet);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPoint);
  }
  try {
    fdHessian(pogorelovU(3), point({0.5, 1e-4, 0}), 1e-4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooCloseToSingularity);
  }
  CHECK(zPrimeNorm(point({7, 3, 4})) == doctest::Approx(5));
  // Smooth fields do not care.
  CHECK_NOTHROW(fdHessian(quadratic(3), onSet, 1e-4));
}

TEST_CASE("field lookup") {
  CHECK(fieldById("pogorelov_u", 3).id == "pogorelov_u");
  CHECK(fieldById("phi_R", 3, 0.6).domain.radius == 0.6);
  CHECK(fieldById("quadratic", 2)(point({1, C(0, 2)})) == doctest::Approx(5));
  CHECK(fieldById("pluriharmonic", 2)(point({C(1, 1), 0})) == doctest::Approx(0));
  try {
    fieldById("nope", 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("ball volume and grids") {
  CHECK(Ball::unit(2).volume() == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-15));
  CHECK(Ball{Point::Zero(3), 0.5}.volume() ==
        doctest::Approx(std::pow(std::numbers::pi, 3) * std::pow(0.5, 6) / 6).epsilon(1e-15));

  const Ball b{point({0.2, C(0, -0.1)}), 0.7};
  double previous = 1;
  for (int per : {6, 12, 24}) {
    const auto g = GridDomain::tensor(2, b, per);
    CHECK(g.totalWeight() == doctest::Approx(b.volume()).epsilon(1e-12));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(b.contains(g.points[i]));
      CHECK(g.weights[i] > 0);
    }
    // The raw cell volume converges to the ball volume.
    const double err = std::abs(g.rawVolumeRatio - 1);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 0.05);

  const auto excl = GridDomain::tensor(3, Ball::unit(3), 9, 0.2, SingularSet::ZPrimeZero);
  for (const Point& z : excl.points) CHECK(zPrimeNorm(z) >= 0.2);
  CHECK(excl.describe()["points"] == excl.size());
}

TEST_CASE("sphere samples lie on the sphere and are reproducible") {
  const Ball b{point({1, 0, C(0, 1)}), 0.3};
  const auto s = sphereSample(b, 100, 5);
  CHECK(s.size() == 100);
  for (const Point& z : s) CHECK((z - b.center).norm() == doctest::Approx(0.3).epsilon(1e-14));
  // The first 4n points are the real axis directions.
  CHECK((s[0] - b.center - point({0.3, 0, 0})).norm() < 1e-15);
  const auto t = sphereSample(b, 100, 5);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == t[i]);
}
