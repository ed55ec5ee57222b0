#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hessianlab/barrier.hpp"
#include "test_support.hpp"

using namespace hessianlab;
using hessianlab::testing::SampleRng;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }
double normalization(int n) { return std::pow(4.0, n) * factorial(n); }
// (r v')^n = K int_0^r g s^{2n-1} ds with K = n / (n! 2^{n-1}).
double reductionConstant(int n) { return n / (factorial(n) * std::pow(2.0, n - 1)); }

Point along(int n, double r, std::uint64_t seed) {
  SampleRng rng(seed);
  Point z(n);
  for (int i = 0; i < n; ++i) z(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return z * (r / z.norm());
}

RadialDensity smoothDensity() {
  return RadialDensity::custom([](double r) { return 1 + r * r + 0.5 * std::sin(4 * r); }, "smooth");
}

}  // namespace

TEST_CASE("normalization constants") {
  CHECK(maNormalization(2) == 32);
  CHECK(maNormalization(3) == 384);
  CHECK(radialConstant(2) == doctest::Approx(reductionConstant(2)).epsilon(1e-15));
  CHECK(radialConstant(4) == doctest::Approx(reductionConstant(4)).epsilon(1e-15));
}

TEST_CASE("reduction formula against difference determinants of the reconstructed barrier") {
  // Independent of the eigenvalue branches: fdHessian of rho(z) = v(|z|).
  for (int n : {2, 3}) {
    for (const RadialDensity& g : {smoothDensity(), RadialDensity::constant(5.0), RadialDensity::poly({2, 0, 0, 3})}) {
      const RadialProfile p = radialMaSolve(g, n, 256);
      const ScalarField rho = p.field();
      for (double r : {0.2, 0.45, 0.7, 0.9}) {
        const Point z = along(n, r, static_cast<std::uint64_t>(100 * r));
        const Matrix h = fdHessian(rho, z, 1e-3);
        const double lhs = normalization(n) * determinant(h);
        INFO(g.tag, " n = ", n, " r = ", r);
        CHECK(lhs == doctest::Approx(g(r)).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("eigenvalue branches reproduce the density") {
  for (int n : {2, 3, 4}) {
    const RadialProfile p = radialMaSolve(smoothDensity(), n, 256);
    for (std::size_t i = 1; i + 1 < p.nodes().size(); i += 7) {
      const double r = p.nodes()[i];
      const double det = std::pow(p.tangential(r), n - 1) * p.radial(r);
      CHECK(normalization(n) * det == doctest::Approx(smoothDensity()(r)).epsilon(1e-6));
      CHECK(p.tangential(r) >= -1e-10);
      CHECK(p.radial(r) >= -1e-10);
    }
    // Both branches tend to (1/2) (K g(0) / (2n))^{1/n} at the origin.
    const double limit = 0.5 * std::pow(reductionConstant(n) * smoothDensity()(0) / (2 * n), 1.0 / n);
    CHECK(p.tangential(0) == doctest::Approx(limit).epsilon(1e-12));
    CHECK(p.tangential(1e-4) == doctest::Approx(limit).epsilon(1e-3));
    CHECK(p.radial(1e-4) == doctest::Approx(limit).epsilon(1e-3));
  }
}

TEST_CASE("hessian of the barrier: eigenvectors") {
  const RadialProfile p = radialMaSolve(RadialDensity::constant(3), 3, 128);
  const Point z = along(3, 0.6, 4);
  const Matrix h = p.hessian(z);
  // z itself spans the radial direction of D^2 rho (entries rho_{j bar k} ~ bar z_j z_k).
  const auto spec = eigenvalues(h);
  CHECK(spec.min() == doctest::Approx(std::min(p.tangential(0.6), p.radial(0.6))).epsilon(1e-12));
  CHECK(spec.max() == doctest::Approx(std::max(p.tangential(0.6), p.radial(0.6))).epsilon(1e-12));
  CHECK((h - fdHessian(p.field(), z, 1e-3)).frobeniusNorm() < 1e-6);
}

TEST_CASE("constant densities: closed forms") {
  for (int n : {2, 3, 4}) {
    const RadialProfile p = radialMaSolve(RadialDensity::constant(normalization(n)), n, 256);
    CHECK(p.values().back() == 0);
    for (std::size_t i = 0; i < p.nodes().size(); ++i) {
      const double r = p.nodes()[i];
      CHECK(std::abs(p.values()[i] - (r * r - 1)) <= 1e-8);
      CHECK(std::abs(p.derivatives()[i] - 2 * r) <= 1e-8);
    }
    CHECK(supDeficit(p) == doctest::Approx(1).epsilon(1e-10));
    CHECK(std::abs(p.value(0.3141) - (0.3141 * 0.3141 - 1)) <= 1e-8);
  }
  // rho = a (|z|^2 - 1) with 4^n n! a^n = c.
  CHECK(std::abs(supDeficit(radialMaSolve(RadialDensity::constant(7), 3, 256)) - std::cbrt(7.0 / 384)) <= 1e-8);
  const RadialProfile zero = radialMaSolve(RadialDensity::constant(0), 2, 64);
  for (double v : zero.values()) CHECK(v == 0);
  CHECK(supDeficit(zero) == 0);
}

TEST_CASE("indicator densities: piecewise closed form") {
  // For g = c 1_{r < s}: v' = a r on [0, s), a s^2 / r after, a = (K c / (2n))^{1/n},
  // so sup(-rho) = a s^2 (1/2 + ln(1/s)).
  for (int n : {2, 3}) {
    for (double s : {0.25, 0.5, 0.8, 0.3333}) {
      const double c = 2.5;
      const double a = std::pow(reductionConstant(n) * c / (2 * n), 1.0 / n);
      const double expected = a * s * s * (0.5 + std::log(1 / s));
      CHECK(supDeficit(radialMaSolve(RadialDensity::indicator(c, s), n, 256)) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
  // Several jumps: aligned cells keep the coarse solve close to the fine one.
  const auto pw = RadialDensity::piecewiseConstant({0, 0.3, 0.6, 1}, {2, 0, 1});
  const double fine = supDeficit(radialMaSolve(pw, 2, 1024));
  CHECK(supDeficit(radialMaSolve(pw, 2, 64)) == doctest::Approx(fine).epsilon(1e-6));
}

TEST_CASE("refinement converges at order >= 1.8") {
  for (int n : {2, 3, 4}) {
    const double d64 = supDeficit(radialMaSolve(smoothDensity(), n, 64));
    const double d128 = supDeficit(radialMaSolve(smoothDensity(), n, 128));
    const double d256 = supDeficit(radialMaSolve(smoothDensity(), n, 256));
    CHECK(hessianlab::testing::observedOrder(std::abs(d64 - d128), std::abs(d128 - d256)) >= 1.8);
  }
}

TEST_CASE("scaling and monotonicity") {
  for (int n : {2, 3}) {
    const double base = supDeficit(radialMaSolve(smoothDensity(), n, 256));
    for (double t : {0.1, 10.0}) {
      const double scaled = supDeficit(radialMaSolve(smoothDensity().scaled(t), n, 256));
      CHECK(scaled == doctest::Approx(std::pow(t, 1.0 / n) * base).epsilon(1e-9));
    }
  }
  // Pointwise ordered family: g_j = (1 + j / 10) * smooth + 1_{r < j / 10}.
  double previous = 0;
  for (int j = 0; j < 10; ++j) {
    const double s = j / 10.0;
    const auto g = RadialDensity::custom(
        [s, j](double r) { return (1 + j / 10.0) * smoothDensity()(r) + (r < s ? 1.0 : 0.0); }, "family",
        j ? std::vector<double>{s} : std::vector<double>{});
    const double d = supDeficit(radialMaSolve(g, 3, 256));
    CHECK(d + 1e-9 >= previous);
    previous = d;
  }
}

TEST_CASE("L^q norms") {
  CHECK(lqNorm(RadialDensity::constant(1), 1, 2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-12));
  CHECK(lqNorm(RadialDensity::indicator(1, 0.5), 2, 2) ==
        doctest::Approx(std::sqrt(std::numbers::pi * std::numbers::pi / 32)).epsilon(1e-12));
  const double vol3 = std::pow(std::numbers::pi, 3) / 6;
  CHECK(lqNorm(RadialDensity::constant(3), 4, 3) == doctest::Approx(3 * std::pow(vol3, 0.25)).epsilon(1e-12));
  // g = r on B_1 in C^2, q = 2: (2 pi^2 int_0^1 r^5 dr)^{1/2} = (pi^2 / 3)^{1/2}.
  CHECK(lqNorm(RadialDensity::poly({0, 1}), 2, 2) == doctest::Approx(std::numbers::pi / std::sqrt(3.0)).epsilon(1e-12));
  try {
    lqNorm(RadialDensity::constant(1), 0.5, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("Kolodziej ratio") {
  for (int n : {2, 3}) {
    const double a = kolodziejRatio(RadialDensity::constant(1.7), 2, n);
    const double b = kolodziejRatio(RadialDensity::constant(3.4), 2, n);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
  // g = 4^n n!, n = 2, q = 2: sup(-rho) = 1 and ||g||_2 = 32 (pi^2 / 2)^{1/2}.
  const double expected = 1 / std::sqrt(32 * std::sqrt(std::numbers::pi * std::numbers::pi / 2));
  CHECK(kolodziejRatio(RadialDensity::constant(32), 2, 2) == doctest::Approx(expected).epsilon(1e-10));
  // Indicator family: finite ratios, bounded by the sweep maximum.
  double worst = 0;
  for (int j = 1; j <= 9; ++j) worst = std::max(worst, kolodziejRatio(RadialDensity::indicator(1, j / 10.0), 2, 2));
  CHECK(std::isfinite(worst));
  try {
    kolodziejRatio(RadialDensity::constant(0), 2, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDensity);
  }
}

TEST_CASE("solver input validation") {
  try {
    radialMaSolve(RadialDensity::poly({1, -3}), 2, 64);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeDensity);
  }
  try {
    radialMaSolve(RadialDensity::constant(1), 2, 32);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("density tags") {
  CHECK(RadialDensity::parse("constant:2.5")(0.3) == 2.5);
  const auto ind = RadialDensity::parse("indicator:3:0.4");
  CHECK(ind(0.39) == 3);
  CHECK(ind(0.41) == 0);
  CHECK(ind.jumps == std::vector<double>{0.4});
  CHECK(RadialDensity::parse("poly:1,0,2")(0.5) == doctest::Approx(1.5));
  for (const char* bad : {"constant", "constant:x", "indicator:1", "cubic:1", "poly:"}) {
    try {
      RadialDensity::parse(bad);
      FAIL("expected an error for ", bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
  }
  CHECK(RadialDensity::constant(2).power(3, 0.5)(0.1) == doctest::Approx(4));
}

TEST_CASE("profile export") {
  const RadialProfile p = radialMaSolve(RadialDensity::constant(1), 2, 64);
  std::ostringstream os;
  p.writeCsv(os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,v,vprime,tangential,radial");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == p.nodes().size());
}

TEST_CASE("barrier inequality L_u rho >= g_+") {
  const auto grid2 = GridDomain::tensor(2, Ball::unit(2), 8);
  const auto u2 = affine(quadratic(2), 1, -1);
  const Report self = barrierInequalityCheck(Operator::mongeAmpere(2), u2, RadialDensity::constant(1), grid2);
  CHECK(self.pass());
  // rho = u here, so L_u rho = G(D^2 u) = 1: equality to the tolerance.
  CHECK(std::abs(self.metrics["min_slack"].get<double>()) <= 1e-6);

  const auto grid3 = GridDomain::tensor(3, Ball::unit(3), 6);
  CHECK(barrierInequalityCheck(Operator::sigmaM(3, 2), affine(quadratic(3), 1, -1), RadialDensity::constant(1), grid3)
            .pass());
  CHECK(barrierInequalityCheck(Operator::sigmaM(3, 2), perturbedQuadratic(3), smoothDensity(), grid3).pass());
  const Report zero = barrierInequalityCheck(Operator::mongeAmpere(2), u2, RadialDensity::constant(0), grid2);
  CHECK(zero.pass());
}
