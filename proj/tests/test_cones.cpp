#include "doctest.h"
#include "hessianlab/cones.hpp"
#include "hessianlab/parallel.hpp"
#include "test_support.hpp"

using namespace hessianlab;
using hessianlab::testing::SampleRng;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) d(i++) = v;
  return Matrix::diagonal(d);
}

// sigma_q > 0 for q <= m, by brute force over subsets.
bool inGammaBrute(const Vector& l, int m) {
  const int n = static_cast<int>(l.size());
  for (int q = 1; q <= m; ++q) {
    double s = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != q) continue;
      double p = 1;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) p *= l(i);
      s += p;
    }
    if (!(s > 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("membership: worked examples") {
  const Point z3 = origin(3), z2 = origin(2);
  CHECK(ConeFamily::gammaM(3, 3).contains(z3, Matrix::identity(3)));
  CHECK_FALSE(ConeFamily::gammaM(2, 2).contains(z2, diag({-1, 3})));
  CHECK(ConeFamily::gammaM(2, 1).contains(z2, diag({-1, 3})));
  CHECK(ConeFamily::mMonge(3, 2).contains(z3, diag({-1, 2, 3})));
  CHECK_FALSE(ConeFamily::mMonge(3, 2).contains(z3, diag({-3, 2, 3})));
  CHECK(ConeFamily::interp(0.5).contains(z2, diag({-0.4, 1})));
  CHECK_FALSE(ConeFamily::interp(0.5).contains(z2, diag({-0.6, 1})));
  CHECK(ConeFamily::positive(2).contains(z2, diag({0.1, 5})));
  CHECK_FALSE(ConeFamily::positive(2).contains(z2, diag({-0.1, 5})));
}

TEST_CASE("membership: boundary is indeterminate, never inside") {
  const Point z = origin(2);
  CHECK(ConeFamily::positive(2).classify(z, diag({0, 1})) == Membership::Indeterminate);
  CHECK_FALSE(ConeFamily::positive(2).contains(z, diag({0, 1})));
  CHECK(ConeFamily::gammaM(2, 1).classify(z, diag({-1, 1})) == Membership::Indeterminate);
  CHECK(ConeFamily::positive(2).classify(z, diag({-1, 1})) == Membership::Outside);
  // Scale-normalized: tiny matrices are classified by shape, not magnitude.
  CHECK(ConeFamily::positive(2).classify(z, diag({1e-20, 2e-20})) == Membership::Inside);
}

TEST_CASE("membership: dimension mismatch") {
  try {
    ConeFamily::positive(3).classify(origin(3), Matrix::identity(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("membership agrees with brute-force sigma signs") {
  SampleRng rng(11);
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m <= n; ++m) {
      const auto cone = ConeFamily::gammaM(n, m);
      for (int t = 0; t < 200; ++t) {
        Vector l(n);
        for (int i = 0; i < n; ++i) l(i) = rng.uniform(-1, 3);
        const Matrix a = Matrix::diagonal(l).congruence(randomUnitary<double>(n, rng.engine()));
        const auto c = cone.classify(origin(n), a);
        if (c == Membership::Indeterminate) continue;
        CHECK((c == Membership::Inside) == inGammaBrute(l, m));
      }
    }
  }
}

TEST_CASE("positive definite matrices lie in every cone, and cones nest") {
  SampleRng rng(5);
  for (int n = 2; n <= 5; ++n) {
    const Point z = origin(n);
    std::vector<ConeFamily> cones = {ConeFamily::positive(n)};
    for (int m = 1; m <= n; ++m) {
      cones.push_back(ConeFamily::gammaM(n, m));
      cones.push_back(ConeFamily::mMonge(n, m));
    }
    if (n == 2)
      for (double a : {0.0, 0.3, 1.0}) cones.push_back(ConeFamily::interp(a));
    for (int t = 0; t < 100; ++t) {
      const Matrix p = randomHermitian<double>(n, rng.engine(), 1e-3, 10.0);
      for (const auto& c : cones) CHECK(c.contains(z, p));
      const Matrix a = randomHermitian<double>(n, rng.engine(), -2.0, 3.0);
      for (int m = 2; m <= n; ++m) {
        if (ConeFamily::gammaM(n, m).contains(z, a)) CHECK(ConeFamily::gammaM(n, m - 1).contains(z, a));
      }
      for (const auto& c : cones) {
        if (!c.contains(z, a)) continue;
        CHECK(c.contains(z, a * 1e-3));
        CHECK(c.contains(z, a * 1e3));
        CHECK(c.contains(z, a * 0.5));
        CHECK(c.contains(z, a * 2.0));
      }
    }
  }
}

TEST_CASE("unitary invariance reports") {
  const Report a = checkUnitaryInvariance(ConeFamily::gammaM(3, 2), 500, 3);
  CHECK(a.pass());
  CHECK(a.samples == 500);
  CHECK(a.maxViolation == 0);
  CHECK(checkUnitaryInvariance(ConeFamily::positive(2), 100, 0).pass());
  CHECK(checkUnitaryInvariance(ConeFamily::interp(0.5), 200, 0).pass());
  CHECK(checkUnitaryInvariance(ConeFamily::mMonge(4, 2), 200, 1).pass());
}

TEST_CASE("unitary invariance needs the identity background") {
  const auto bg = BackgroundForm::constant(diag({2, 1, 1}));
  try {
    checkUnitaryInvariance(ConeFamily::gammaM(3, 2, bg), 10, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedBackground);
  }
}

TEST_CASE("convexity reports") {
  CHECK(checkConvexity(ConeFamily::gammaM(3, 2), 500, 0).pass());
  CHECK(checkConvexity(ConeFamily::positive(3), 500, 1).pass());
  CHECK(checkConvexity(ConeFamily::interp(1.0), 500, 2).pass());
  CHECK(checkConvexity(ConeFamily::mMonge(4, 3), 300, 3).pass());
}

TEST_CASE("a non-convex custom cone is caught") {
  // Union of two opposite orthants, defined through the eigenvalues.
  const auto cone = ConeFamily::custom(2, "two_orthants", [](const Vector& l) {
    const double s = l.cwiseAbs().maxCoeff();
    return std::vector<double>{std::max(l(0), -l(1)) / s, std::max(l(1), -l(0)) / s};
  });
  CHECK(cone.contains(origin(2), diag({1, 2})));
  const Report r = checkConvexity(cone, 400, 4);
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.witnesses.empty());
}

TEST_CASE("background forms: eigenvalues are relative to B") {
  const Matrix b = diag({2, 4});
  const auto bg = BackgroundForm::constant(b);
  const auto s = bg.spectrum(origin(2), diag({2, 8}));
  CHECK(s.values(0) == doctest::Approx(1).epsilon(1e-14));
  CHECK(s.values(1) == doctest::Approx(2).epsilon(1e-14));
  CHECK(ConeFamily::positive(2, bg).contains(origin(2), b));

  const auto varying = BackgroundForm::varying(2, [](const Point& z) {
    Vector d(2);
    d << 1 + std::norm(z(0)), 1;
    return Matrix::diagonal(d);
  });
  Point z(2);
  z << std::complex<double>(1, 1), 0;
  const auto sv = varying.spectrum(z, diag({3, 1}));
  CHECK(sv.values(0) == doctest::Approx(1).epsilon(1e-14));
  CHECK(sv.values(1) == doctest::Approx(1).epsilon(1e-14));

  try {
    BackgroundForm::constant(diag({1, -1}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("relative sampling is deterministic and lands in the requested spectrum") {
  const auto bg = BackgroundForm::constant(diag({2, 1, 3}));
  std::mt19937_64 r1(42), r2(42);
  const Matrix a = randomRelativeTo(bg, origin(3), r1, 0.5, 2.0);
  const Matrix b = randomRelativeTo(bg, origin(3), r2, 0.5, 2.0);
  CHECK(a == b);
  const auto s = bg.spectrum(origin(3), a);
  CHECK(s.min() >= 0.5 - 1e-12);
  CHECK(s.max() <= 2.0 + 1e-12);

  std::mt19937_64 r3(1);
  const auto cone = ConeFamily::gammaM(4, 2);
  for (int t = 0; t < 50; ++t) {
    const Matrix c = sampleInCone(cone, origin(4), r3, 1e-6);
    CHECK(cone.classify(origin(4), c) == Membership::Inside);
    CHECK(cone.margin(eigenvalues(c).values) >= 1e-6);
  }
}

TEST_CASE("cone reports are reproducible") {
  const auto a = toJson(checkConvexity(ConeFamily::gammaM(3, 2), 200, 9)).dump();
  const auto b = toJson(checkConvexity(ConeFamily::gammaM(3, 2), 200, 9)).dump();
  CHECK(a == b);
}
