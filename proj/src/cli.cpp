#include "hessianlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "hessianlab/abp.hpp"
#include "hessianlab/barrier.hpp"
#include "hessianlab/cones.hpp"
#include "hessianlab/counterexample.hpp"
#include "hessianlab/operators.hpp"
#include "hessianlab/parallel.hpp"

namespace hessianlab::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string op = "ma";
  std::string cone = "gamma_m";
  int n = 3;
  int m = 2;
  int l = 1;
  double a = 0.5;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool expectFail = false;
  std::string check = "all";
  double R = 0.5;
  std::string density = "constant:1";
  int M = 256;
  double q = 2;
  double p = 4;
  double r = 4;
  bool corollary = false;
  std::string instance = "all";
  int grid = 9;
  std::string family = "corpus";

  Json toJson() const {
    return Json{{"command", command}, {"op", op},          {"cone", cone},         {"n", n},
                {"m", m},             {"l", l},            {"a", a},               {"samples", samples},
                {"seed", seed},       {"format", format},  {"expect_fail", expectFail}, {"check", check},
                {"R", R},             {"density", density}, {"M", M},             {"q", q},
                {"p", p},             {"r", r},            {"corollary", corollary}, {"instance", instance},
                {"grid", grid},       {"family", family}};
  }
};

struct Outcome {
  Outcome() = default;
  Outcome(std::vector<Report> r) : reports(std::move(r)) {}
  std::vector<Report> reports;
  Json extra = Json::object();
  std::string csv;
};

Operator operatorFrom(const RunConfig& c) {
  if (c.op == "ma") return Operator::mongeAmpere(c.n);
  if (c.op == "sigma_m") return Operator::sigmaM(c.n, c.m);
  if (c.op == "m_ma") return Operator::mMongeAmpere(c.n, c.m);
  if (c.op == "interp") return Operator::interp(c.a);
  if (c.op == "hessian_quotient") return Operator::hessianQuotient(c.n, c.m, c.l);
  throw Error(ErrorCode::InvalidArgument, "unknown operator '" + c.op + "'");
}

ConeFamily coneFrom(const RunConfig& c) {
  if (c.cone == "positive") return ConeFamily::positive(c.n);
  if (c.cone == "gamma_m") return ConeFamily::gammaM(c.n, c.m);
  if (c.cone == "m_monge") return ConeFamily::mMonge(c.n, c.m);
  if (c.cone == "interp") return ConeFamily::interp(c.a);
  throw Error(ErrorCode::InvalidArgument, "unknown cone '" + c.cone + "'");
}

std::string reportsCsv(const std::vector<Report>& reports) {
  std::ostringstream os;
  os.precision(17);
  os << "check,subject,n,samples,max_violation,tolerance,status,expect_fail\n";
  for (const auto& r : reports) {
    os << r.check << ',' << r.subject << ',' << r.n << ',' << r.samples << ',' << r.maxViolation << ','
       << r.tolerance << ',' << label(r.status) << ',' << (r.expectFail ? "true" : "false") << '\n';
  }
  return os.str();
}

Outcome verifyOperator(const RunConfig& c) {
  return Outcome(verifyAxioms(operatorFrom(c), c.samples, c.seed));
}

Outcome cones(const RunConfig& c) {
  const ConeFamily cone = coneFrom(c);
  return Outcome({checkUnitaryInvariance(cone, c.samples, c.seed), checkConvexity(cone, c.samples, mixSeed(c.seed, 1))});
}

Outcome counterexample(const RunConfig& c) {
  Outcome o;
  const bool all = c.check == "all";
  bool known = all;
  const Ball unit = Ball::unit(c.n);
  const Ball ballR{Point::Zero(c.n), c.R};
  if (all || c.check == "ma-identity") {
    known = true;
    const auto g = GridDomain::tensor(c.n, unit, c.grid, 1e-3, SingularSet::ZPrimeZero);
    o.reports.push_back(verifyMaIdentity(c.n, g));
    o.reports.push_back(verifyMaIdentityDifference(c.n, g));
  }
  if (all || c.check == "phi-degenerate") {
    known = true;
    o.reports.push_back(verifyPhiDegenerate(c.n, c.R, GridDomain::tensor(c.n, ballR, c.grid, 1e-3 * c.R,
                                                                          SingularSet::ZPrimeZero)));
  }
  if (all || c.check == "nonstrict-max") {
    known = true;
    o.reports.push_back(verifyNonstrictMax(c.n, c.R, GridDomain::tensor(c.n, ballR, c.grid)));
  }
  if (all || c.check == "linearized-gap") {
    known = true;
    if (c.n != 3) throw Error(ErrorCode::InvalidDimension, "linearized-gap is stated for n = 3");
    const auto g = GridDomain::tensor(3, ballR, c.grid, 1e-3 * c.R, SingularSet::ZPrimeZero);
    std::ostringstream csv;
    o.reports.push_back(verifyLinearizedGap(c.R, g, c.format == "csv" ? &csv : nullptr));
    o.csv = csv.str();
  }
  if (!known) throw Error(ErrorCode::InvalidArgument, "unknown counterexample check '" + c.check + "'");
  return o;
}

Outcome radialMa(const RunConfig& c) {
  const RadialDensity g = RadialDensity::parse(c.density);
  const RadialProfile rho = radialMaSolve(g, c.n, c.M);
  Report r;
  r.check = "radial_ma";
  r.subject = g.tag;
  r.anchor = "(dd^c rho)^n = g dV on B_1, rho = 0 on the sphere, sup(-rho) <= C ||g||_{L^q}^{1/n}";
  r.n = c.n;
  r.samples = rho.nodes().size();
  r.tolerance = 1e-10;
  // Radial plurisubharmonic profile: v(1) = 0, v' >= 0, v <= 0, both branches >= -1e-10.
  double worst = std::abs(rho.values().back());
  for (std::size_t i = 0; i < rho.nodes().size(); ++i) {
    const double t = rho.nodes()[i];
    worst = std::max({worst, -rho.derivatives()[i], rho.values()[i]});
    if (i > 0 && i + 1 < rho.nodes().size()) worst = std::max({worst, -rho.tangential(t), -rho.radial(t)});
  }
  r.maxViolation = worst;
  r.status = worst <= r.tolerance ? Status::Pass : Status::Fail;
  const double norm = lqNorm(g, c.q, c.n);
  r.metrics["sup_deficit"] = supDeficit(rho);
  r.metrics["lq_norm"] = norm;
  r.metrics["q"] = c.q;
  r.metrics["kolodziej_ratio"] = norm > 0 ? number(supDeficit(rho) / std::pow(norm, 1.0 / c.n)) : Json(nullptr);
  r.metrics["normalization"] = rho.normalization();
  r.metrics["cells"] = rho.cells();
  Outcome o({r});
  std::ostringstream csv;
  rho.writeCsv(csv);
  o.csv = csv.str();
  return o;
}

AbpConfig abpConfig(const RunConfig& c) {
  AbpConfig cfg;
  cfg.pExp = c.p;
  cfg.rExp = c.r;
  cfg.corollary = c.corollary;
  cfg.seed = c.seed;
  cfg.perAxis = c.grid;
  return cfg;
}

Outcome abp(const RunConfig& c) {
  std::vector<AbpInstanceSpec> specs = defaultAbpCorpus();
  specs.push_back(zeroRightHandSideInstance());
  Outcome o;
  bool found = false;
  for (auto& spec : specs) {
    if (c.instance != "all" && spec.id != c.instance) continue;
    found = true;
    spec.perAxis = std::min(spec.perAxis, c.grid);
    o.reports.push_back(runAbpInstance(spec, abpConfig(c)));
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "unknown abp instance '" + c.instance + "'");
  return o;
}

Outcome abpSweep(const RunConfig& c) {
  const SweepTable t = constantSweep(c.family, abpConfig(c));
  Outcome o;
  Report r;
  r.check = "abp_constant_sweep";
  r.subject = c.family;
  r.anchor = "realized constants sup(-u) / ||g_+||_{L^p} over an instance family";
  r.samples = t.rows.size();
  bool all = true;
  for (const auto& row : t.rows) all = all && row.pass;
  r.status = all ? Status::Pass : Status::Fail;
  r.metrics["table"] = t.toJson();
  o.reports.push_back(r);
  std::ostringstream csv;
  t.writeCsv(csv);
  o.csv = csv.str();
  return o;
}

Outcome maxPrinciple(const RunConfig& c) {
  std::vector<MaxPrincipleSpec> specs = defaultMaxPrincipleCorpus();
  if (c.instance == "control") specs = {maxPrincipleControl()};
  Outcome o;
  bool found = false;
  for (const auto& s : specs) {
    if (c.instance != "all" && c.instance != "control" && s.id != c.instance) continue;
    found = true;
    const auto grid = GridDomain::tensor(s.coeffs.n, Ball::unit(s.coeffs.n), s.perAxis, 1e-3, s.u.singular);
    Report r = maxPrincipleCheck(s.coeffs, s.u, grid, s.M, 0, c.seed);
    r.subject = s.id;
    o.reports.push_back(std::move(r));
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "unknown max-principle instance '" + c.instance + "'");
  return o;
}

int exitFor(const std::vector<Report>& reports, bool expectFail) {
  bool hypothesis = false, expected = true, anyFail = false;
  for (const auto& r : reports) {
    hypothesis = hypothesis || r.status == Status::HypothesisViolated;
    expected = expected && r.asExpected();
    anyFail = anyFail || r.status == Status::Fail;
  }
  if (hypothesis) return kHypothesis;
  if (expectFail) return anyFail ? kSuccess : kCheckFailed;
  return expected ? kSuccess : kCheckFailed;
}

int exitForError(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDimension:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IndexOutOfRange:
      return kUsage;
    case ErrorCode::HypothesisViolated:
      return kHypothesis;
    default:
      return kCheckFailed;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Verification laboratory for complex Hessian operators", "hessianlab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file supplying defaults");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.add_option("--op", c.op, "ma | sigma_m | m_ma | interp | hessian_quotient");
  app.add_option("--cone", c.cone, "positive | gamma_m | m_monge | interp");
  app.add_option("--n", c.n, "complex dimension");
  app.add_option("--m", c.m, "order m");
  app.add_option("--l", c.l, "lower order l of a Hessian quotient");
  app.add_option("--a", c.a, "interpolation parameter a");
  app.add_option("--samples", c.samples, "random samples per check");
  app.add_option("--seed", c.seed, "master seed (HESSIANLAB_SEED overrides)");
  app.add_option("--out", c.out, "output file (default: standard output)");
  app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--expect-fail", c.expectFail, "exit 0 when a requested check fails");
  app.add_option("--check", c.check, "ma-identity | phi-degenerate | nonstrict-max | linearized-gap | all");
  app.add_option("--R", c.R, "radius R of the competitor");
  app.add_option("--density", c.density, "constant:c | indicator:c:s | poly:a0,a1,...");
  app.add_option("--M", c.M, "radial cells (>= 64)");
  app.add_option("--q", c.q, "exponent q of the density norm");
  app.add_option("--p", c.p, "integrability exponent p");
  app.add_option("--r", c.r, "Sobolev exponent r");
  app.add_flag("--corollary", c.corollary, "measure against ||f||^{1/k} with f = (delta G)^k");
  app.add_option("--instance", c.instance, "instance id, 'all' or (max-principle) 'control'");
  app.add_option("--grid", c.grid, "grid cells per real axis");
  app.add_option("--family", c.family, "radius | p | scaling | corpus");

  using Handler = Outcome (*)(const RunConfig&);
  const std::vector<std::pair<std::string, Handler>> commands = {
      {"verify-operator", verifyOperator}, {"cones", cones},    {"counterexample", counterexample},
      {"radial-ma", radialMa},             {"abp", abp},        {"abp-sweep", abpSweep},
      {"max-principle", maxPrinciple}};
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, fn] : commands) subs.push_back({app.add_subcommand(name), fn});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "hessianlab: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  if (const char* env = std::getenv("HESSIANLAB_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "hessianlab: HESSIANLAB_SEED is not an unsigned integer\n";
      return kUsage;
    }
  }
  Handler handler = nullptr;
  for (const auto& [sub, fn] : subs) {
    if (sub->parsed()) {
      c.command = sub->get_name();
      handler = fn;
    }
  }

  Outcome o;
  try {
    o = handler(c);
  } catch (const Error& e) {
    err << "hessianlab: " << e.what() << "\n";
    return exitForError(e.code());
  }

  const Json config = c.toJson();
  Json doc;
  doc["command"] = c.command;
  doc["config"] = config;
  Json reports = Json::array();
  bool pass = true, expected = true;
  for (auto& r : o.reports) {
    r.metrics["config"] = config;
    reports.push_back(toJson(r));
    pass = pass && r.pass();
    expected = expected && r.asExpected();
  }
  doc["reports"] = reports;
  doc["pass"] = pass;
  doc["as_expected"] = expected;
  const int code = exitFor(o.reports, c.expectFail);
  doc["exit_code"] = code;

  std::string text;
  if (c.format == "csv") {
    text = o.csv.empty() ? reportsCsv(o.reports) : o.csv;
  } else {
    text = doc.dump(2) + "\n";
  }
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "hessianlab: cannot write " << c.out << "\n";
      return kUsage;
    }
    f << text;
  }
  return code;
}

}  // namespace hessianlab::cli
