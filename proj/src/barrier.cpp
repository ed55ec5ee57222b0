#include "hessianlab/barrier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hessianlab/parallel.hpp"

namespace hessianlab {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                           0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

template <typename Fn>
double gauss(double a, double b, Fn&& f) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0;
  for (int i = 0; i < 5; ++i) s += kGaussW[i] * f(mid + half * kGaussX[i]);
  return s * half;
}

// Uniform nodes i / M merged with the jump points inside (0, 1).
std::vector<double> jumpAlignedNodes(int M, const std::vector<double>& jumps) {
  std::vector<double> nodes;
  for (int i = 0; i <= M; ++i) nodes.push_back(static_cast<double>(i) / M);
  for (double j : jumps)
    if (j > 0 && j < 1) nodes.push_back(j);
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  for (double x : nodes)
    if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
  out.back() = 1.0;
  return out;
}

void requireNonnegative(double value, double r, const RadialDensity& g) {
  if (!(value >= 0)) {
    std::ostringstream os;
    os << "density " << g.tag << " is " << value << " at r = " << r;
    throw Error(ErrorCode::NegativeDensity, os.str());
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

RadialDensity RadialDensity::constant(double c) {
  return {[c](double) { return c; }, {}, "constant:" + fmt(c)};
}

RadialDensity RadialDensity::indicator(double c, double s) {
  return {[c, s](double r) { return r < s ? c : 0.0; }, {s}, "indicator:" + fmt(c) + ":" + fmt(s)};
}

RadialDensity RadialDensity::poly(std::vector<double> coeffs) {
  std::string tag = "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) tag += (i ? "," : "") + fmt(coeffs[i]);
  return {[coeffs](double r) {
            double s = 0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * r + *it;
            return s;
          },
          {},
          tag};
}

RadialDensity RadialDensity::piecewiseConstant(std::vector<double> edges, std::vector<double> values) {
  if (edges.size() != values.size() + 1 || edges.front() != 0) {
    throw Error(ErrorCode::InvalidArgument, "piecewise density needs edges 0 = e_0 < ... and one value per cell");
  }
  std::vector<double> jumps(edges.begin() + 1, edges.end() - 1);
  return {[edges, values](double r) {
            const auto it = std::upper_bound(edges.begin(), edges.end(), r);
            const std::size_t cell = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0),
                                                           values.size() - 1);
            return r < edges.back() ? values[cell] : 0.0;
          },
          jumps,
          "piecewise:" + std::to_string(values.size())};
}

RadialDensity RadialDensity::custom(std::function<double(double)> fn, std::string tag, std::vector<double> jumps) {
  return {std::move(fn), std::move(jumps), std::move(tag)};
}

RadialDensity RadialDensity::parse(const std::string& tag) {
  auto fail = [&] { return Error(ErrorCode::InvalidArgument, "bad density tag '" + tag + "'"); };
  const auto colon = tag.find(':');
  if (colon == std::string::npos) throw fail();
  const std::string kind = tag.substr(0, colon);
  std::vector<double> nums;
  std::string rest = tag.substr(colon + 1);
  for (char& c : rest)
    if (c == ':' || c == ',') c = ' ';
  std::istringstream is(rest);
  double x;
  while (is >> x) nums.push_back(x);
  if (!is.eof()) throw fail();
  if (kind == "constant" && nums.size() == 1) return constant(nums[0]);
  if (kind == "indicator" && nums.size() == 2) return indicator(nums[0], nums[1]);
  if (kind == "poly" && !nums.empty()) return poly(nums);
  throw fail();
}

RadialDensity RadialDensity::scaled(double t) const {
  return {[f = fn, t](double r) { return t * f(r); }, jumps, fmt(t) + "*" + tag};
}

RadialDensity RadialDensity::power(double p, double a) const {
  return {[f = fn, p, a](double r) { return a * std::pow(f(r), p); }, jumps, fmt(a) + "*(" + tag + ")^" + fmt(p)};
}

double maNormalization(int n) { return std::pow(4.0, n) * std::tgamma(n + 1.0); }

double radialConstant(int n) { return 1.0 / (std::tgamma(static_cast<double>(n)) * std::pow(2.0, n - 1)); }

RadialProfile radialMaSolve(const RadialDensity& density, int n, int M) {
  requireDimension(n);
  if (M < 64) throw Error(ErrorCode::InvalidArgument, "radial solver needs M >= 64");
  RadialProfile p;
  p.n_ = n;
  p.k_ = radialConstant(n);
  p.density_ = density;
  p.r_ = jumpAlignedNodes(M, density.jumps);
  p.cells_ = static_cast<int>(p.r_.size()) - 1;
  const std::size_t nodes = p.r_.size();
  const int e = 2 * n - 1;
  // Gauss nodes are interior, so jumps at cell ends never enter a cell.
  auto integrand = [&](double s) {
    const double g = density(s);
    requireNonnegative(g, s, density);
    return g * std::pow(s, e);
  };
  auto slope = [&](double r, double mass) { return r == 0 ? 0.0 : std::pow(p.k_ * mass, 1.0 / n) / r; };

  p.mass_.assign(nodes, 0.0);
  std::vector<double> midSlope(nodes - 1);
  for (std::size_t c = 0; c + 1 < nodes; ++c) {
    const double a = p.r_[c], b = p.r_[c + 1], m = 0.5 * (a + b);
    const double left = gauss(a, m, integrand);
    p.mass_[c + 1] = p.mass_[c] + left + gauss(m, b, integrand);
    midSlope[c] = slope(m, p.mass_[c] + left);
  }
  p.vp_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) p.vp_[i] = slope(p.r_[i], p.mass_[i]);
  p.v_.assign(nodes, 0.0);
  for (std::size_t c = nodes - 1; c-- > 0;) {
    const double a = p.r_[c], b = p.r_[c + 1];
    p.v_[c] = p.v_[c + 1] - (b - a) / 6 * (p.vp_[c] + 4 * midSlope[c] + p.vp_[c + 1]);
  }
  return p;
}

std::size_t RadialProfile::cellOf(double r) const {
  if (!(r >= 0 && r <= 1)) throw Error(ErrorCode::InvalidArgument, "radius " + fmt(r) + " outside [0, 1]");
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  return std::min<std::size_t>(static_cast<std::size_t>(it - r_.begin()) - 1, static_cast<std::size_t>(cells_ - 1));
}

double RadialProfile::integralTo(double r) const {
  const std::size_t c = cellOf(r);
  const double a = r_[c];
  if (r == a) return mass_[c];
  const int e = 2 * n_ - 1;
  return mass_[c] + gauss(a, r, [&](double s) { return density_(s) * std::pow(s, e); });
}

double RadialProfile::derivative(double r) const {
  if (r == 0) return 0;
  return std::pow(k_ * integralTo(r), 1.0 / n_) / r;
}

double RadialProfile::value(double r) const {
  const std::size_t c = cellOf(r);
  const double a = r_[c];
  if (r == a) return v_[c];
  return v_[c] + gauss(a, r, [&](double s) { return derivative(s); });
}

double RadialProfile::tangential(double r) const {
  if (r == 0) return 0.5 * std::pow(k_ * density_(0) / (2 * n_), 1.0 / n_);
  return std::pow(k_ * integralTo(r), 1.0 / n_) / (2 * r * r);
}

double RadialProfile::radial(double r) const {
  if (r == 0) return tangential(0);
  const double w = std::pow(k_ * integralTo(r), 1.0 / n_);
  if (w == 0) return 0;
  return k_ * density_(r) * std::pow(r, 2 * n_ - 2) * std::pow(w, 1 - n_) / (4 * n_);
}

Matrix RadialProfile::hessian(const Point& z) const {
  requireSameDimension(static_cast<int>(z.size()), n_);
  const double r = z.norm();
  const double t = tangential(r);
  Matrix::Dense m = Matrix::Dense::Identity(n_, n_) * t;
  if (r > 0) {
    const double extra = (radial(r) - t) / (r * r);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(j, k) += extra * std::conj(z(j)) * z(k);
  }
  return Matrix::symmetrized(m);
}

ScalarField RadialProfile::field() const {
  ScalarField f;
  f.id = "radial_barrier";
  f.n = n_;
  f.domain = Ball::unit(n_);
  const RadialProfile self = *this;
  f.value = [self](const Point& z) { return self.value(std::min(1.0, z.norm())); };
  f.exactHessian = [self](const Point& z) { return self.hessian(z); };
  f.metadata["density"] = density_.tag;
  return f;
}

void RadialProfile::writeCsv(std::ostream& os) const {
  os << "r,v,vprime,tangential,radial\n";
  os.precision(17);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    os << r_[i] << ',' << v_[i] << ',' << vp_[i] << ',' << tangential(r_[i]) << ',' << radial(r_[i]) << '\n';
  }
}

double supDeficit(const RadialProfile& profile) { return -profile.values().front(); }

double lqNorm(const RadialDensity& density, double q, int n, int M) {
  if (!(q >= 1)) throw Error(ErrorCode::InvalidArgument, "L^q norm needs q >= 1");
  const auto nodes = jumpAlignedNodes(M, density.jumps);
  const int e = 2 * n - 1;
  auto f = [&](double s) { return std::pow(std::abs(density(s)), q) * std::pow(s, e); };
  double sum = 0;
  for (std::size_t c = 0; c + 1 < nodes.size(); ++c) sum += gauss(nodes[c], nodes[c + 1], f);
  const double sphere = 2 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
  return std::pow(sphere * sum, 1 / q);
}

double kolodziejRatio(const RadialDensity& density, double q, int n, int M) {
  const double norm = lqNorm(density, q, n);
  if (norm == 0) throw Error(ErrorCode::ZeroDensity, "density " + density.tag + " vanishes identically");
  return supDeficit(radialMaSolve(density, n, M)) / std::pow(norm, 1.0 / n);
}

Report barrierInequalityCheck(const Operator& op, const ScalarField& u, const RadialDensity& g,
                              const GridDomain& grid, int M) {
  constexpr double kTol = 1e-6;
  const int n = op.dim();
  requireSameDimension(grid.n, n);
  const RadialProfile rho = radialMaSolve(g.power(n, maNormalization(n)), n, M);
  Report r;
  r.check = "barrier_inequality";
  r.subject = op.name() + " / " + u.id;
  r.anchor = "L_u rho >= g_+ for the radial barrier rho with (dd^c rho)^n = 4^n n! g_+^n dV";
  r.n = n;
  r.tolerance = kTol;
  struct Outcome {
    bool skipped = false;
    double lhs = 0, rhs = 0;
  };
  const double cutoff = 1.0 / M;
  auto outcomes = parallelMap<Outcome>(grid.size(), [&](std::size_t i) {
    const Point& z = grid.points[i];
    const double radius = z.norm();
    Outcome o;
    if (radius < cutoff || radius > 1) {
      o.skipped = true;
      return o;
    }
    const Matrix a = u.hasExactHessian() ? u.hessian(z) : fdHessian(u, z);
    o.lhs = traceProduct(op.gradient(z, a), rho.hessian(z));
    o.rhs = std::max(0.0, g(radius));
    return o;
  });
  WitnessCollector wc;
  double worst = 0, minSlack = std::numeric_limits<double>::infinity();
  std::size_t skipped = 0, bad = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.skipped) {
      ++skipped;
      continue;
    }
    const double slack = o.lhs - o.rhs;
    minSlack = std::min(minSlack, slack);
    worst = std::max(worst, -slack);
    if (-slack > kTol) {
      ++bad;
      wc.offer({i, -slack, Json{{"z", toJson(grid.points[i])}, {"L_u_rho", number(o.lhs)}, {"g", number(o.rhs)}}});
    }
  }
  r.samples = grid.size() - skipped;
  r.maxViolation = std::max(0.0, worst);
  r.status = bad == 0 ? Status::Pass : Status::Fail;
  r.witnesses = wc.take();
  r.metrics["min_slack"] = number(minSlack);
  r.metrics["skipped_near_center"] = skipped;
  r.metrics["radial_cells"] = rho.cells();
  r.metrics["density"] = g.tag;
  r.metrics["grid"] = grid.describe();
  return r;
}

}  // namespace hessianlab
