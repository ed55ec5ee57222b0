#include "hessianlab/abp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hessianlab/parallel.hpp"

namespace hessianlab {

namespace {

constexpr double kDominationTol = 1e-6;
constexpr double kZeroRhsTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix hessianOf(const ScalarField& u, const Point& z) {
  return u.hasExactHessian() ? u.hessian(z) : fdHessian(u, z);
}

std::size_t boundaryCount(const AbpConfig& cfg, int n) {
  if (cfg.angularSamples) return cfg.angularSamples;
  return std::max<std::size_t>(std::size_t{1} << (2 * n - 1), 4096);
}

std::size_t majorantCount(const AbpConfig& cfg, int n) {
  if (cfg.angularSamples) return cfg.angularSamples;
  return std::max<std::size_t>(std::size_t{1} << (2 * n - 1), 256);
}

double singularMargin(const ScalarField& u, const Ball& domain) {
  return u.singular == SingularSet::None ? 0.0 : 1e-3 * domain.radius;
}

std::string pointText(const Point& z) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < z.size(); ++i) os << (i ? ", " : "(") << z(i);
  os << ")";
  return os.str();
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Point pointOf(std::initializer_list<std::complex<double>> xs) {
  Point z(static_cast<int>(xs.size()));
  int i = 0;
  for (auto x : xs) z(i++) = x;
  return z;
}

}  // namespace

void AbpConfig::validate() const {
  std::ostringstream why;
  if (!(rExp > n)) why << "r = " << rExp << " must exceed n = " << n << "; ";
  if (corollary) {
    if (!(pExp >= 1)) why << "p = " << pExp << " must be >= 1; ";
    if (!(k > 0) || !(pExp > n / k)) why << "p = " << pExp << " must exceed n/k = " << n / k << "; ";
  } else if (!(pExp > n)) {
    why << "p = " << pExp << " must exceed n = " << n << "; ";
  }
  if (!why.str().empty()) throw Error(ErrorCode::HypothesisViolated, why.str());
}

Json AbpConfig::describe() const {
  Json j;
  j["n"] = n;
  j["r"] = rExp;
  j["p"] = pExp;
  j["q"] = qExp();
  j["k"] = k;
  j["delta"] = delta;
  j["corollary"] = corollary;
  j["per_axis"] = perAxis;
  j["radial_nodes"] = radialNodes;
  j["bands"] = bands;
  j["angular_samples"] = angularSamples;
  j["safety_factor"] = safetyFactor;
  j["seed"] = seed;
  return j;
}

SupersolutionInstance makeSupersolution(std::string id, const Operator& op, const ScalarField& u, const Ball& domain,
                                        const AbpConfig& cfg, double enclosingFactor) {
  const int n = op.dim();
  requireSameDimension(u.n, n);
  if (!(enclosingFactor >= 1)) throw Error(ErrorCode::InvalidArgument, "enclosing factor must be >= 1");
  GridDomain grid = GridDomain::tensor(n, domain, cfg.perAxis, singularMargin(u, domain), u.singular);
  auto g = parallelMap<double>(grid.size(), [&](std::size_t i) {
    return op.evaluate(grid.points[i], hessianOf(u, grid.points[i]));
  });
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == kNegInf) {
      throw Error(ErrorCode::OffCone, id + ": D^2 u leaves the cone of " + op.name() + " at z = " +
                                          pointText(grid.points[i]));
    }
  }
  std::vector<Point> boundary = sphereSample(domain, boundaryCount(cfg, n), mixSeed(cfg.seed, 0xB0));
  double lo = kInf;
  for (const Point& b : boundary) lo = std::min(lo, u(b));
  const double shift = -lo;
  SupersolutionInstance inst{.id = std::move(id), .op = op, .u = affine(u, 1, shift), .domain = domain,
                             .grid = std::move(grid), .g = std::move(g), .boundary = std::move(boundary)};
  inst.shift = shift;
  double minAfter = kInf;
  for (const Point& b : inst.boundary) minAfter = std::min(minAfter, inst.u(b));
  inst.boundaryMin = minAfter;
  inst.enclosingRadius = enclosingFactor * domain.radius;
  return inst;
}

RadialDensity radialMajorant(const SupersolutionInstance& inst, const AbpConfig& cfg) {
  const int n = inst.op.dim();
  const int bands = cfg.bands;
  const double D = inst.enclosingRadius;
  const double inner = inst.domain.radius / D;
  const Point& c = inst.domain.center;
  const double margin = singularMargin(inst.u, inst.domain);
  const auto directions = sphereSample(Ball{Point::Zero(n), 1.0}, majorantCount(cfg, n), mixSeed(cfg.seed, 0xA0));

  // g~(zeta) = D^2 g(c + D zeta) on radii k / (2 bands), clipped inside the domain.
  const int radii = 2 * bands + 1;
  auto sphereMax = parallelMap<double>(static_cast<std::size_t>(radii), [&](std::size_t k) {
    const double t = static_cast<double>(k) / (2 * bands);
    if (t >= inner) return 0.0;
    double best = 0;
    for (const Point& d : directions) {
      const Point z = c + d * (t * D);
      if (margin > 0 && zPrimeNorm(z) < margin) continue;
      best = std::max(best, D * D * inst.op.evaluate(z, hessianOf(inst.u, z)));
      if (t == 0) break;
    }
    return best;
  });
  std::vector<double> bandMax(bands, 0.0);
  for (int j = 0; j < bands; ++j)
    bandMax[j] = std::max({sphereMax[2 * j], sphereMax[2 * j + 1], sphereMax[2 * j + 2]});
  for (std::size_t i = 0; i < inst.grid.size(); ++i) {
    const double t = (inst.grid.points[i] - c).norm() / D;
    const int j = std::min(bands - 1, static_cast<int>(t * bands));
    bandMax[j] = std::max(bandMax[j], D * D * std::max(0.0, inst.g[i]));
  }
  std::vector<double> edges(bands + 1), values(bands);
  for (int j = 0; j <= bands; ++j) edges[j] = static_cast<double>(j) / bands;
  for (int j = 0; j < bands; ++j) {
    if (edges[j] >= inner) {
      values[j] = 0;
      continue;
    }
    double m = bandMax[j];
    if (j > 0) m = std::max(m, bandMax[j - 1]);
    if (j + 1 < bands) m = std::max(m, bandMax[j + 1]);
    values[j] = cfg.safetyFactor * m;
  }
  RadialDensity out = RadialDensity::piecewiseConstant(edges, values);
  out.tag = "majorant:" + inst.id;
  return out;
}

Report abpEstimateCheck(const SupersolutionInstance& inst, const AbpConfig& cfg) {
  cfg.validate();
  const Operator& op = inst.op;
  const int n = op.dim();
  Report r;
  r.check = "abp_estimate";
  r.subject = inst.id;
  r.anchor = cfg.corollary ? "sup(-u) <= C ||f||_{L^p}^{1/k} for supersolutions with u >= 0 on the boundary"
                           : "sup(-u) <= C(n, diam, r, p) ||g_+||_{L^p} for G(z, D^2 u) <= g, u >= 0 on the boundary";
  r.n = n;
  r.samples = inst.grid.size();
  r.tolerance = kDominationTol;
  r.metrics["config"] = cfg.describe();
  r.metrics["operator"] = op.describe();
  r.metrics["field"] = inst.u.id;
  r.metrics["domain"] = Json{{"center", toJson(inst.domain.center)}, {"radius", inst.domain.radius}};
  r.metrics["enclosing_radius"] = inst.enclosingRadius;
  r.metrics["grid"] = inst.grid.describe();
  r.metrics["shift"] = inst.shift;
  r.metrics["boundary_min"] = inst.boundaryMin;
  r.metrics["boundary_samples"] = inst.boundary.size();

  if (inst.boundaryMin < -1e-12) {
    r.status = Status::HypothesisViolated;
    r.maxViolation = -inst.boundaryMin;
    r.metrics["failure_kind"] = "hypothesis: u >= 0 on the boundary";
    return r;
  }

  // Over the closure: grid, centre and the boundary sample.
  double supNegU = -inst.u(inst.domain.center);
  for (const Point& z : inst.grid.points) supNegU = std::max(supNegU, -inst.u(z));
  for (const Point& z : inst.boundary) supNegU = std::max(supNegU, -inst.u(z));
  supNegU += 0.0;
  double maxG = 0, sumG = 0, sumF = 0;
  const double k = op.degree(), delta = op.delta();
  for (std::size_t i = 0; i < inst.grid.size(); ++i) {
    const double gp = std::max(0.0, inst.g[i]);
    maxG = std::max(maxG, gp);
    sumG += inst.grid.weights[i] * std::pow(gp, cfg.pExp);
    sumF += inst.grid.weights[i] * std::pow(std::pow(delta * gp, k), cfg.pExp);
  }
  const double normG = std::pow(sumG, 1 / cfg.pExp);
  const double normF = std::pow(sumF, 1 / cfg.pExp);
  r.metrics["sup_neg_u"] = supNegU;
  r.metrics["lp_norm_g"] = normG;
  if (cfg.corollary) r.metrics["lp_norm_f"] = normF;

  if (maxG == 0) {
    r.notes.push_back("ZeroRightHandSide: g_+ vanishes on the grid, the estimate forces sup(-u) <= 0");
    r.tolerance = kZeroRhsTol;
    r.maxViolation = std::max(0.0, supNegU);
    r.status = supNegU <= kZeroRhsTol ? Status::Pass : Status::Fail;
    r.metrics["realized_C"] = nullptr;
    r.metrics["failure_kind"] = r.pass() ? "none" : "bound: sup(-u) > 0 with zero right-hand side";
    return r;
  }

  const RadialDensity majorant = radialMajorant(inst, cfg);
  const RadialDensity barrierDensity = majorant.power(n, maNormalization(n));
  const RadialProfile rho = radialMaSolve(barrierDensity, n, cfg.radialNodes);
  const double D = inst.enclosingRadius;
  const Point& c = inst.domain.center;
  auto slack = parallelMap<double>(inst.grid.size(), [&](std::size_t i) {
    const Point& z = inst.grid.points[i];
    return inst.u(z) - rho.value(std::min(1.0, (z - c).norm() / D));
  });
  WitnessCollector wc;
  double minSlack = kInf;
  std::size_t below = 0;
  for (std::size_t i = 0; i < slack.size(); ++i) {
    minSlack = std::min(minSlack, slack[i]);
    if (slack[i] < -kDominationTol) {
      ++below;
      wc.offer({i, -slack[i], Json{{"z", toJson(inst.grid.points[i])}, {"u_minus_rho", number(slack[i])}}});
    }
  }
  const double supNegRho = supDeficit(rho);
  const bool supHolds = supNegU <= supNegRho;
  const double realized = cfg.corollary ? supNegU / std::pow(normF, 1 / k) : supNegU / normG;

  r.maxViolation = std::max({0.0, -minSlack, supNegU - supNegRho});
  r.status = below == 0 && supHolds ? Status::Pass : Status::Fail;
  r.witnesses = wc.take();
  r.metrics["sup_neg_rho"] = supNegRho;
  r.metrics["min_u_minus_rho"] = minSlack;
  r.metrics["points_below_barrier"] = below;
  r.metrics["realized_C"] = number(realized);
  r.metrics["barrier_ratio"] = number(supNegRho / normG);
  r.metrics["majorant_at_center"] = number(majorant(0));
  r.metrics["barrier_density_lq_norm"] = number(lqNorm(barrierDensity, std::max(1.0, cfg.qExp()), n));
  r.metrics["failure_kind"] = r.pass() ? "none" : (below ? "bound: rho > u at grid points" : "bound: sup(-u) > sup(-rho)");
  return r;
}

Report maxPrincipleCheck(const CoefficientField& coeffs, const ScalarField& u, const GridDomain& grid, double M,
                         std::size_t boundarySamples, std::uint64_t seed) {
  const int n = coeffs.n;
  requireSameDimension(u.n, n);
  requireSameDimension(grid.n, n);
  Report r;
  r.check = "max_principle";
  r.subject = u.id;
  r.anchor = "a >= 0, sum a^{i bar i} >= M, sum a^{i bar j} u_{i bar j} >= 0 imply max over the closure = max on the boundary";
  r.n = n;
  r.samples = grid.size();
  r.metrics["M"] = M;
  r.metrics["grid"] = grid.describe();

  struct Outcome {
    double minEig = 0, trace = 0, pairing = 0, value = 0, grad = 0;
  };
  auto outcomes = parallelMap<Outcome>(grid.size(), [&](std::size_t i) {
    const Point& z = grid.points[i];
    const Matrix a = coeffs.at(z);
    Outcome o;
    o.minEig = eigenvalues(a).min();
    o.trace = a.trace();
    o.pairing = traceProduct(a, hessianOf(u, z));
    o.value = u(z);
    const double h = 1e-6 * (1 + z.norm());
    double g2 = 0;
    for (int k = 0; k < n; ++k) {
      for (std::complex<double> dir : {std::complex<double>(1, 0), std::complex<double>(0, 1)}) {
        Point e = Point::Zero(n);
        e(k) = dir * h;
        const double d = (u(z + e) - u(z - e)) / (2 * h);
        g2 += d * d;
      }
    }
    o.grad = std::sqrt(g2);
    return o;
  });

  WitnessCollector hyp;
  double worstHyp = 0, minEig = kInf, minTrace = kInf, minPairing = kInf, maxGrad = 0, interiorMax = -kInf;
  std::size_t hypCount = 0, argmax = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    minEig = std::min(minEig, o.minEig);
    minTrace = std::min(minTrace, o.trace);
    minPairing = std::min(minPairing, o.pairing);
    maxGrad = std::max(maxGrad, o.grad);
    if (o.value > interiorMax) {
      interiorMax = o.value;
      argmax = i;
    }
    const double dEig = -1e-10 - o.minEig, dTrace = (M - 1e-10) - o.trace, dPair = -1e-8 - o.pairing;
    if (dEig > 0 || dTrace > 0 || dPair > 0) {
      ++hypCount;
      const char* which = dPair > 0 ? "sum a^{i bar j} u_{i bar j} >= 0"
                                    : (dTrace > 0 ? "sum a^{i bar i} >= M" : "a positive semidefinite");
      const double deficit = std::max({dEig, dTrace, dPair});
      worstHyp = std::max(worstHyp, deficit);
      hyp.offer({i, deficit, Json{{"z", toJson(grid.points[i])}, {"violated", which}, {"min_eigenvalue", number(o.minEig)},
                                  {"trace", number(o.trace)}, {"pairing", number(o.pairing)}}});
    }
  }
  r.metrics["min_eigenvalue"] = number(minEig);
  r.metrics["min_trace"] = number(minTrace);
  r.metrics["min_pairing"] = number(minPairing);
  if (hypCount) {
    r.status = Status::HypothesisViolated;
    r.maxViolation = worstHyp;
    r.witnesses = hyp.take();
    r.metrics["hypothesis_violations"] = hypCount;
    r.metrics["failure_kind"] = "hypothesis";
    return r;
  }

  const std::size_t count = boundarySamples ? boundarySamples : std::max<std::size_t>(std::size_t{1} << (2 * n - 1), 4096);
  const auto boundary = sphereSample(grid.region, count, mixSeed(seed, 0xC0));
  double bLo = kInf, bHi = -kInf;
  for (const Point& b : boundary) {
    const double v = u(b);
    bLo = std::min(bLo, v);
    bHi = std::max(bHi, v);
  }
  const double tolGeom = grid.spacing * maxGrad * 4;
  const double allowed = bHi + 0.01 * (bHi - bLo) + tolGeom;
  r.tolerance = tolGeom;
  r.maxViolation = std::max(0.0, interiorMax - (bHi + 0.01 * (bHi - bLo)));
  r.status = interiorMax <= allowed ? Status::Pass : Status::Fail;
  if (!r.pass()) r.witnesses.push_back({argmax, interiorMax - allowed, Json{{"z", toJson(grid.points[argmax])}}});
  r.metrics["interior_max"] = interiorMax;
  r.metrics["boundary_max"] = bHi;
  r.metrics["boundary_min"] = bLo;
  r.metrics["boundary_samples"] = boundary.size();
  r.metrics["tol_geom"] = tolGeom;
  r.metrics["max_gradient"] = maxGrad;
  r.metrics["failure_kind"] = r.pass() ? "none" : "bound: interior max exceeds boundary max";
  return r;
}

std::vector<AbpInstanceSpec> defaultAbpCorpus() {
  const Point offCenter2 = pointOf({{0.3, 0}, {0, -0.2}});
  const Point offAxis3 = pointOf({0, 0.5, 0});
  std::vector<AbpInstanceSpec> c;
  c.push_back({"ma2_quadratic", Operator::mongeAmpere(2), quadratic(2), Ball::unit(2)});
  c.push_back({"ma3_quadratic", Operator::mongeAmpere(3), quadratic(3), Ball::unit(3)});
  c.push_back({"sigma2_3_quadratic", Operator::sigmaM(3, 2), quadratic(3), Ball::unit(3)});
  c.push_back({"ma2_perturbed", Operator::mongeAmpere(2), perturbedQuadratic(2), Ball::unit(2)});
  c.push_back({"ma3_perturbed", Operator::mongeAmpere(3), perturbedQuadratic(3), Ball::unit(3)});
  c.push_back({"sigma2_2_perturbed", Operator::sigmaM(2, 2), perturbedQuadratic(2), Ball::unit(2)});
  c.push_back({"sigma2_3_perturbed", Operator::sigmaM(3, 2), perturbedQuadratic(3), Ball::unit(3)});
  c.push_back({"ma2_weighted", Operator::mongeAmpere(2), weightedQuadratic(vec({1, 3})), Ball{offCenter2, 0.5}, 1.5});
  c.push_back({"sigma2_3_weighted", Operator::sigmaM(3, 2), weightedQuadratic(vec({1, 2, 0.5})),
               Ball{Point::Zero(3), 0.75}});
  c.push_back({"ma3_pogorelov_centered", Operator::mongeAmpere(3), pogorelovU(3), Ball{Point::Zero(3), 0.5}});
  c.push_back({"ma3_pogorelov_offaxis", Operator::mongeAmpere(3), pogorelovU(3), Ball{offAxis3, 0.4}});
  c.push_back({"sigma2_3_pogorelov_offaxis", Operator::sigmaM(3, 2), pogorelovU(3), Ball{offAxis3, 0.4}});
  return c;
}

AbpInstanceSpec zeroRightHandSideInstance() {
  const int n = 2;
  CoefficientField trace{n, [n](const Point&) { return Matrix::identity(n) * (1.0 / n); }};
  return {"linear_zero_rhs", Operator::linear(trace, "trace_over_n"), pluriharmonic(n), Ball::unit(n)};
}

std::vector<MaxPrincipleSpec> defaultMaxPrincipleCorpus() {
  std::vector<MaxPrincipleSpec> c;
  auto constant = [](const Matrix& a) { return CoefficientField{a.dim(), [a](const Point&) { return a; }}; };
  c.push_back({"re_z1_identity", constant(Matrix::identity(2)), realPart(2), 2});
  c.push_back({"quadratic_identity", constant(Matrix::identity(2)), quadratic(2), 2});
  c.push_back({"saddle_weighted", constant(Matrix::diagonal(vec({2, 1}))), saddle(2), 3});
  {
    const ScalarField u = pogorelovU(3);
    c.push_back({"pogorelov_linearized_ma", linearize(Operator::mongeAmpere(3), [u](const Point& z) { return u.hessian(z); }),
                 u, 1, 7});
  }
  {
    const ScalarField u = perturbedQuadratic(3);
    c.push_back({"perturbed_linearized_sigma2",
                 linearize(Operator::sigmaM(3, 2), [u](const Point& z) { return u.hessian(z); }), u, 1, 7});
  }
  c.push_back({"mixed_product_varying",
               CoefficientField{2,
                                [](const Point& z) {
                                  return Matrix::diagonal(vec({1 + std::norm(z(0)), 1 + std::norm(z(1))}));
                                }},
               mixedProduct(2), 2});
  return c;
}

MaxPrincipleSpec maxPrincipleControl() {
  return {"neg_quadratic_identity", CoefficientField{2, [](const Point&) { return Matrix::identity(2); }},
          negQuadratic(2), 2};
}

Report runAbpInstance(const AbpInstanceSpec& spec, AbpConfig cfg) {
  cfg.n = spec.op.dim();
  cfg.perAxis = spec.perAxis;
  if (cfg.corollary) {
    cfg.k = spec.op.degree();
    cfg.delta = spec.op.delta();
  }
  const auto inst = makeSupersolution(spec.id, spec.op, spec.u, spec.domain, cfg, spec.enclosingFactor);
  return abpEstimateCheck(inst, cfg);
}

void SweepTable::writeCsv(std::ostream& os) const {
  os << "instance_id,n,p,r,k,delta,sup_neg_u,lp_norm,realized_C,pass\n";
  os.precision(17);
  for (const auto& row : rows) {
    os << row.instanceId << ',' << row.n << ',' << row.p << ',' << row.r << ',' << row.k << ',' << row.delta << ','
       << row.supNegU << ',' << row.lpNorm << ',' << row.realizedC << ',' << (row.pass ? "true" : "false") << '\n';
  }
}

Json SweepTable::toJson() const {
  Json j;
  j["family"] = family;
  Json rs = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    rs.push_back(Json{{"instance_id", row.instanceId}, {"n", row.n}, {"p", row.p}, {"r", row.r}, {"k", row.k},
                      {"delta", row.delta}, {"sup_neg_u", number(row.supNegU)}, {"lp_norm", number(row.lpNorm)},
                      {"realized_C", number(row.realizedC)}, {"pass", row.pass}, {"running_max", number(runningMax[i])}});
  }
  j["rows"] = rs;
  j["max_realized_C"] = runningMax.empty() ? Json(nullptr) : number(runningMax.back());
  return j;
}

SweepTable constantSweep(const std::string& family, const AbpConfig& base) {
  std::vector<std::pair<AbpInstanceSpec, AbpConfig>> jobs;
  auto ma2 = [](std::string id, ScalarField u, Ball b) {
    return AbpInstanceSpec{std::move(id), Operator::mongeAmpere(2), std::move(u), std::move(b)};
  };
  if (family == "radius") {
    for (double d : {0.25, 0.5, 1.0}) {
      std::ostringstream id;
      id << "radius_" << d;
      jobs.push_back({ma2(id.str(), quadratic(2), Ball{Point::Zero(2), d}), base});
    }
  } else if (family == "p") {
    for (double p : {2.5, 3.0, 4.0}) {
      AbpConfig cfg = base;
      cfg.pExp = p;
      std::ostringstream id;
      id << "p_" << p;
      jobs.push_back({ma2(id.str(), quadratic(2), Ball::unit(2)), cfg});
    }
  } else if (family == "scaling") {
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      std::ostringstream id;
      id << "scale_" << t;
      jobs.push_back({ma2(id.str(), affine(quadratic(2), t, 0), Ball::unit(2)), base});
    }
  } else if (family == "corpus") {
    for (auto& spec : defaultAbpCorpus()) jobs.push_back({spec, base});
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown sweep family '" + family + "'");
  }

  SweepTable table;
  table.family = family;
  double running = -kInf;
  for (auto& [spec, cfg] : jobs) {
    const Report rep = runAbpInstance(spec, cfg);
    SweepRow row;
    row.instanceId = spec.id;
    row.n = spec.op.dim();
    row.p = cfg.pExp;
    row.r = cfg.rExp;
    row.k = spec.op.degree();
    row.delta = spec.op.delta();
    row.supNegU = rep.metrics.value("sup_neg_u", 0.0);
    row.lpNorm = rep.metrics.value("lp_norm_g", 0.0);
    const auto& c = rep.metrics["realized_C"];
    row.realizedC = c.is_number() ? c.get<double>() : std::numeric_limits<double>::quiet_NaN();
    row.pass = rep.asExpected();
    if (!std::isnan(row.realizedC)) running = std::max(running, row.realizedC);
    table.rows.push_back(row);
    table.runningMax.push_back(running);
  }
  return table;
}

}  // namespace hessianlab
