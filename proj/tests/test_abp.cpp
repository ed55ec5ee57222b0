#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hessianlab/abp.hpp"
#include "test_support.hpp"

using namespace hessianlab;

namespace {

const double kPi2Over2 = std::numbers::pi * std::numbers::pi / 2;

AbpConfig smallConfig(int n) {
  AbpConfig cfg;
  cfg.n = n;
  cfg.perAxis = 8;
  return cfg;
}

void expectCode(auto&& fn, ErrorCode code) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("config validation") {
  AbpConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rExp = 2;
  expectCode([&] { cfg.validate(); }, ErrorCode::HypothesisViolated);
  cfg = AbpConfig{};
  cfg.pExp = 1.5;
  expectCode([&] { cfg.validate(); }, ErrorCode::HypothesisViolated);
  cfg = AbpConfig{};
  cfg.corollary = true;
  cfg.k = 0.25;
  cfg.pExp = 4;  // p > n / k = 8 fails
  expectCode([&] { cfg.validate(); }, ErrorCode::HypothesisViolated);
  cfg.pExp = 9;
  CHECK_NOTHROW(cfg.validate());
  CHECK(AbpConfig{}.qExp() == 2);
  CHECK(AbpConfig{}.describe()["safety_factor"] == 1.01);
}

TEST_CASE("quadratic Monge-Ampere instance in C^2") {
  const AbpConfig cfg = smallConfig(2);
  const auto inst = makeSupersolution("q", Operator::mongeAmpere(2), quadratic(2), Ball::unit(2), cfg);
  CHECK(inst.shift == doctest::Approx(-1).epsilon(1e-14));
  CHECK(std::abs(inst.boundaryMin) <= 1e-14);
  for (double g : inst.g) CHECK(g == doctest::Approx(1).epsilon(1e-12));
  CHECK(inst.boundary.size() >= 8);

  const Report r = abpEstimateCheck(inst, cfg);
  CHECK(r.pass());
  CHECK(r.metrics["sup_neg_u"].get<double>() == doctest::Approx(1).epsilon(1e-14));
  // ||1||_{L^4(B_1)} = vol^{1/4}, vol(B_1 in C^2) = pi^2 / 2.
  CHECK(r.metrics["lp_norm_g"].get<double>() == doctest::Approx(std::pow(kPi2Over2, 0.25)).epsilon(1e-10));
  CHECK(r.metrics["realized_C"].get<double>() == doctest::Approx(std::pow(kPi2Over2, -0.25)).epsilon(1e-10));
  CHECK(r.metrics["min_u_minus_rho"].get<double>() >= -1e-6);
  CHECK(r.metrics["sup_neg_u"].get<double>() <= r.metrics["sup_neg_rho"].get<double>());
}

TEST_CASE("majorant dominates the sampled right-hand side") {
  const AbpConfig cfg = smallConfig(3);
  const auto inst =
      makeSupersolution("p", Operator::sigmaM(3, 2), perturbedQuadratic(3), Ball::unit(3), cfg);
  const RadialDensity maj = radialMajorant(inst, cfg);
  for (std::size_t i = 0; i < inst.grid.size(); ++i) {
    const double t = inst.grid.points[i].norm();
    CHECK(maj(t) >= std::max(0.0, inst.g[i]));
  }
  // Rescaled domain strictly inside: the majorant vanishes outside it.
  const auto spec = defaultAbpCorpus()[7];
  AbpConfig c2 = smallConfig(2);
  const auto off = makeSupersolution(spec.id, spec.op, spec.u, spec.domain, c2, spec.enclosingFactor);
  CHECK(off.enclosingRadius == doctest::Approx(0.75));
  CHECK(radialMajorant(off, c2)(0.9) == 0);
}

TEST_CASE("hypotheses: cone membership and boundary sign") {
  const AbpConfig cfg = smallConfig(2);
  expectCode([&] { makeSupersolution("neg", Operator::mongeAmpere(2), negQuadratic(2), Ball::unit(2), cfg); },
             ErrorCode::OffCone);

  auto inst = makeSupersolution("q", Operator::mongeAmpere(2), quadratic(2), Ball::unit(2), cfg);
  inst.u = affine(inst.u, 1, -0.5);
  inst.boundaryMin = -0.5;
  const Report r = abpEstimateCheck(inst, cfg);
  CHECK(r.status == Status::HypothesisViolated);
  CHECK(r.maxViolation == doctest::Approx(0.5));
}

TEST_CASE("vanishing right-hand side forces sup(-u) <= 0") {
  const Report r = runAbpInstance(zeroRightHandSideInstance(), smallConfig(2));
  CHECK(r.pass());
  CHECK(r.metrics["realized_C"].is_null());
  CHECK(r.metrics["sup_neg_u"].get<double>() <= 1e-9);
  bool noted = false;
  for (const auto& n : r.notes) noted = noted || n.find("ZeroRightHandSide") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("corpus instances pass and give finite constants") {
  AbpConfig cfg;
  cfg.perAxis = 6;
  for (auto spec : defaultAbpCorpus()) {
    spec.perAxis = std::min(spec.perAxis, 6);
    const Report r = runAbpInstance(spec, cfg);
    INFO(spec.id);
    CHECK(r.pass());
    CHECK(std::isfinite(r.metrics["realized_C"].get<double>()));
    CHECK(r.metrics["realized_C"].get<double>() >= 0);
  }
}

TEST_CASE("constant sweeps: closed forms") {
  AbpConfig cfg;
  cfg.perAxis = 6;
  const SweepTable radius = constantSweep("radius", cfg);
  REQUIRE(radius.rows.size() == 3);
  double previous = 0;
  for (const auto& row : radius.rows) {
    const double d = std::stod(row.instanceId.substr(7));
    CHECK(row.pass);
    CHECK(row.supNegU == doctest::Approx(d * d).epsilon(1e-12));
    CHECK(row.realizedC == doctest::Approx(d * d / std::pow(kPi2Over2 * std::pow(d, 4), 0.25)).epsilon(1e-10));
    CHECK(row.realizedC > previous);
    previous = row.realizedC;
  }
  CHECK(radius.runningMax.back() == doctest::Approx(previous));

  const SweepTable p = constantSweep("p", cfg);
  REQUIRE(p.rows.size() == 3);
  for (const auto& row : p.rows) CHECK(row.realizedC == doctest::Approx(std::pow(kPi2Over2, -1 / row.p)).epsilon(1e-10));

  const SweepTable scaling = constantSweep("scaling", cfg);
  REQUIRE(scaling.rows.size() == 4);
  for (const auto& row : scaling.rows) {
    CHECK(row.pass);
    CHECK(std::abs(row.realizedC - scaling.rows[0].realizedC) <= 1e-9 * scaling.rows[0].realizedC);
  }

  expectCode([&] { constantSweep("nope", cfg); }, ErrorCode::InvalidArgument);
}

TEST_CASE("sweep table export") {
  AbpConfig cfg;
  cfg.perAxis = 5;
  const SweepTable t = constantSweep("p", cfg);
  std::ostringstream os;
  t.writeCsv(os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "instance_id,n,p,r,k,delta,sup_neg_u,lp_norm,realized_C,pass");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3);
  CHECK(t.toJson()["rows"].size() == 3);
  CHECK(t.toJson().dump() == constantSweep("p", cfg).toJson().dump());
}

TEST_CASE("maximum principle: corpus and control") {
  for (const auto& spec : defaultMaxPrincipleCorpus()) {
    const auto grid = GridDomain::tensor(spec.coeffs.n, Ball::unit(spec.coeffs.n), std::min(spec.perAxis, 7),
                                         spec.id.find("pogorelov") != std::string::npos ? 1e-2 : 0,
                                         spec.id.find("pogorelov") != std::string::npos ? SingularSet::ZPrimeZero
                                                                                        : SingularSet::None);
    const Report r = maxPrincipleCheck(spec.coeffs, spec.u, grid, spec.M);
    INFO(spec.id);
    CHECK(r.pass());
    CHECK(r.metrics["interior_max"].get<double>() <= r.metrics["boundary_max"].get<double>() +
                                                         r.metrics["tol_geom"].get<double>());
  }
  const auto control = maxPrincipleControl();
  const Report r = maxPrincipleCheck(control.coeffs, control.u, GridDomain::tensor(2, Ball::unit(2), 7), control.M);
  CHECK(r.status == Status::HypothesisViolated);
  CHECK(r.metrics["failure_kind"] == "hypothesis");
}

TEST_CASE("reports are reproducible") {
  const auto spec = defaultAbpCorpus()[3];
  AbpConfig cfg;
  cfg.seed = 17;
  auto small = spec;
  small.perAxis = 5;
  CHECK(toJson(runAbpInstance(small, cfg)).dump() == toJson(runAbpInstance(small, cfg)).dump());
}
