#include "hessianlab/counterexample.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hessianlab/parallel.hpp"

namespace hessianlab {

namespace {

Report baseReport(std::string check, std::string subject, std::string anchor, int n, const GridDomain& grid,
                  double tol) {
  Report r;
  r.check = std::move(check);
  r.subject = std::move(subject);
  r.anchor = std::move(anchor);
  r.n = n;
  r.samples = grid.size();
  r.tolerance = tol;
  r.metrics["grid"] = grid.describe();
  return r;
}

struct PointValue {
  double violation = 0;
  double value = 0;
};

// Fills maxViolation, status and witnesses from per-point violations.
void reduce(Report& r, const std::vector<Point>& points, const std::vector<PointValue>& values) {
  WitnessCollector wc;
  double worst = 0;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    worst = std::max(worst, values[i].violation);
    if (values[i].violation > r.tolerance) {
      ++bad;
      wc.offer({i, values[i].violation, Json{{"z", toJson(points[i])}, {"value", number(values[i].value)}}});
    }
  }
  r.maxViolation = worst;
  r.status = bad == 0 ? Status::Pass : Status::Fail;
  r.witnesses = wc.take();
  r.metrics["violations"] = bad;
}

}  // namespace

Report verifyMaIdentity(int n, const GridDomain& grid) {
  constexpr double kTol = 1e-9;
  Report r = baseReport("ma_identity", "pogorelov_u", "det(D^2 u) = f off {z' = 0} for the Pogorelov-type u", n,
                        grid, kTol);
  const ScalarField u = pogorelovU(n);
  const ScalarField f = pogorelovF(n);
  auto values = parallelMap<PointValue>(grid.size(), [&](std::size_t i) {
    const Point& z = grid.points[i];
    const double d = determinant(u.hessian(z));
    const double fz = f(z);
    return PointValue{std::abs(d - fz) / fz, d};
  });
  reduce(r, grid.points, values);
  r.metrics["relative"] = true;
  return r;
}

Report verifyMaIdentityDifference(int n, const GridDomain& grid, double h, std::size_t maxPoints) {
  constexpr double kMinOrder = 1.8;
  Report r = baseReport("ma_identity_difference", "pogorelov_u",
                        "difference Hessian of u converges to the closed form at second order", n, grid, 0);
  const ScalarField u = pogorelovU(n);
  const ScalarField f = pogorelovF(n);
  std::vector<Point> pts;
  for (const Point& z : grid.points) {
    if (pts.size() >= maxPoints) break;
    if (zPrimeNorm(z) >= 20 * h) pts.push_back(z);
  }
  struct Errors {
    double coarse = 0, fine = 0, detCoarse = 0;
  };
  auto errs = parallelMap<Errors>(pts.size(), [&](std::size_t i) {
    const Point& z = pts[i];
    const Matrix exact = u.hessian(z);
    const Matrix coarse = fdHessian(u, z, h);
    const Matrix fine = fdHessian(u, z, h / 2);
    const double scale = exact.frobeniusNorm();
    Errors e;
    e.coarse = (coarse - exact).frobeniusNorm() / scale;
    e.fine = (fine - exact).frobeniusNorm() / scale;
    e.detCoarse = std::abs(determinant(coarse) - f(z)) / f(z);
    return e;
  });
  double coarse = 0, fine = 0, det = 0;
  for (const auto& e : errs) {
    coarse = std::max(coarse, e.coarse);
    fine = std::max(fine, e.fine);
    det = std::max(det, e.detCoarse);
  }
  const double order = std::log2(coarse / fine);
  r.samples = pts.size();
  r.tolerance = kMinOrder;
  r.maxViolation = std::max(0.0, kMinOrder - order);
  r.status = !pts.empty() && order >= kMinOrder ? Status::Pass : Status::Fail;
  r.metrics["h"] = h;
  r.metrics["max_error_h"] = coarse;
  r.metrics["max_error_h_over_2"] = fine;
  r.metrics["observed_order"] = number(order);
  r.metrics["max_det_relative_error_h"] = det;
  r.notes.push_back("max_violation is the shortfall of the observed order below 1.8");
  return r;
}

Report verifyPhiDegenerate(int n, double R, const GridDomain& grid) {
  constexpr double kTol = 1e-10;
  Report r = baseReport("phi_degenerate", "phi_R", "det(D^2 phi) = 0 since phi depends on z' only", n, grid, kTol);
  const ScalarField phi = phiR(n, R);
  auto values = parallelMap<PointValue>(grid.size(), [&](std::size_t i) {
    const double d = determinant(phi.hessian(grid.points[i]));
    return PointValue{std::max(0.0, d), d};
  });
  reduce(r, grid.points, values);
  r.metrics["R"] = R;
  return r;
}

Report verifyNonstrictMax(int n, double R, const GridDomain& grid, std::size_t singularSamples) {
  constexpr double kTol = 1e-12;
  Report r = baseReport("nonstrict_max", "pogorelov_u - phi_R",
                        "u - phi <= 0 = (u - phi) on {z' = 0} in B_R(0), so the maximum is not strict", n, grid,
                        kTol);
  const ScalarField u = pogorelovU(n);
  const ScalarField phi = phiR(n, R);
  auto values = parallelMap<PointValue>(grid.size(), [&](std::size_t i) {
    const double d = u(grid.points[i]) - phi(grid.points[i]);
    return PointValue{std::max(0.0, d), d};
  });
  reduce(r, grid.points, values);

  double supOff = -std::numeric_limits<double>::infinity();
  std::size_t nonNegativeOff = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (zPrimeNorm(grid.points[i]) == 0) continue;
    supOff = std::max(supOff, values[i].value);
    nonNegativeOff += values[i].value >= 0;
  }

  // Points (z_1, 0) with |z_1| < R on a deterministic spiral.
  std::size_t singularMismatch = 0;
  double worstSingular = 0;
  for (std::size_t k = 0; k < singularSamples; ++k) {
    const double rad = R * (k + 0.5) / static_cast<double>(singularSamples);
    const double theta = 2.399963229728653 * static_cast<double>(k);
    Point z = Point::Zero(n);
    z(0) = std::polar(rad, theta);
    const double d = u(z) - phi(z);
    worstSingular = std::max(worstSingular, std::abs(d));
    if (d != 0) {
      ++singularMismatch;
      r.witnesses.push_back({grid.size() + k, std::abs(d), Json{{"z", toJson(z)}, {"value", number(d)}}});
    }
  }
  if (singularMismatch || nonNegativeOff) r.status = Status::Fail;
  r.metrics["R"] = R;
  r.metrics["sup_off_singular_set"] = number(supOff);
  r.metrics["nonnegative_off_singular_set"] = nonNegativeOff;
  r.metrics["singular_samples"] = singularSamples;
  r.metrics["singular_max_abs"] = worstSingular;
  r.metrics["singular_nonzero"] = singularMismatch;
  r.metrics["epsilon"] = number(-supOff);
  return r;
}

double linearizedClosedForm(const Point& z, double R) {
  const double a = std::norm(z(0));
  const double s = z.tail(z.size() - 1).squaredNorm();
  const double c = 1 + R * R;
  return -(70.0 / 27 + 50.0 / 27 * a) * s + 16.0 / 27 * c + 8.0 / 27 * c * a;
}

double linearizedTrace(const Point& z, double R) {
  const int n = static_cast<int>(z.size());
  return traceProduct(gradDeterminant(pogorelovU(n).hessian(z)), phiR(n, R).hessian(z));
}

double linearizedGapBound(double R) { return (8 - 16 * R * R) / 27; }

Report verifyLinearizedGap(double R, const GridDomain& grid, std::ostream* csv) {
  constexpr int n = 3;
  constexpr double kAgreeTol = 1e-8;
  if (grid.n != n) throw Error(ErrorCode::InvalidDimension, "the linearized gap is stated for n = 3");
  Report r = baseReport("linearized_gap", "L_u phi_R",
                        "L_u phi <= 3 f - epsilon in B_R(0) for n = 3, R < 1/sqrt(2), L_u = adj(D^2 u) pairing", n,
                        grid, kAgreeTol);

  std::vector<Point> points = grid.points;
  std::size_t probes = 0;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    Point a = Point::Zero(n), b = Point::Zero(n);
    a(1) = R * t;
    b(1) = R * t / std::numbers::sqrt2;
    b(2) = std::complex<double>(0, R * t / std::numbers::sqrt2);
    points.push_back(a);
    points.push_back(b);
    probes += 2;
  }

  const ScalarField u = pogorelovU(n);
  const ScalarField phi = phiR(n, R);
  const ScalarField f = pogorelovF(n);
  struct Row {
    double closed = 0, trace = 0, threeF = 0;
  };
  auto rows = parallelMap<Row>(points.size(), [&](std::size_t i) {
    const Point& z = points[i];
    Row row;
    row.closed = linearizedClosedForm(z, R);
    row.trace = traceProduct(gradDeterminant(u.hessian(z)), phi.hessian(z));
    row.threeF = 3 * f(z);
    return row;
  });

  const double bound = linearizedGapBound(R);
  WitnessCollector agreeWitness, gapWitness;
  double agree = 0, minGap = std::numeric_limits<double>::infinity();
  std::size_t gapIndex = 0, disagreements = 0, belowBound = 0, nonPositive = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const double diff = std::abs(row.closed - row.trace) / std::max(1.0, std::abs(row.closed));
    agree = std::max(agree, diff);
    if (diff > kAgreeTol) {
      ++disagreements;
      agreeWitness.offer({i, diff, Json{{"z", toJson(points[i])}, {"closed_form", number(row.closed)},
                                        {"adjugate_trace", number(row.trace)}}});
    }
    const double gap = row.threeF - row.trace;
    if (gap < minGap) {
      minGap = gap;
      gapIndex = i;
    }
    belowBound += gap < bound - kAgreeTol;
    if (gap <= 0) {
      ++nonPositive;
      gapWitness.offer({i, -gap, Json{{"z", toJson(points[i])}, {"L_u_phi", number(row.trace)},
                                      {"three_f", number(row.threeF)}, {"gap", number(gap)}}});
    }
  }
  if (csv) {
    *csv << "re_z1,im_z1,re_z2,im_z2,re_z3,im_z3,L_u_phi,three_f,gap\n";
    csv->precision(17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int k = 0; k < n; ++k) *csv << points[i](k).real() << ',' << points[i](k).imag() << ',';
      *csv << rows[i].trace << ',' << rows[i].threeF << ',' << rows[i].threeF - rows[i].trace << '\n';
    }
  }

  const bool badRadius = R >= 1 / std::numbers::sqrt2;
  r.samples = points.size();
  r.maxViolation = agree;
  r.status = disagreements == 0 && nonPositive == 0 && belowBound == 0 ? Status::Pass : Status::Fail;
  r.expectFail = badRadius;
  r.witnesses = agreeWitness.take();
  for (auto& w : gapWitness.take()) r.witnesses.push_back(w);
  if (r.witnesses.empty() || nonPositive == 0) {
    r.witnesses.push_back({gapIndex, 0, Json{{"z", toJson(points[gapIndex])}, {"gap", number(minGap)},
                                             {"role", "minimum gap"}}});
  }
  if (badRadius) r.notes.push_back("BadRadius: R >= 1/sqrt(2), the gap closes near the origin");
  r.metrics["R"] = R;
  r.metrics["origin_probes"] = probes;
  r.metrics["max_relative_disagreement"] = agree;
  r.metrics["epsilon"] = number(minGap);
  r.metrics["derived_bound"] = bound;
  r.metrics["points_below_bound"] = belowBound;
  r.metrics["points_nonpositive_gap"] = nonPositive;
  r.metrics["bad_radius"] = badRadius;
  return r;
}

}  // namespace hessianlab
