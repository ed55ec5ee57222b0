#include "hessianlab/cones.hpp"

#include <cmath>
#include <limits>

#include "hessianlab/parallel.hpp"

namespace hessianlab {

namespace {

BackgroundForm orIdentity(BackgroundForm bg, int n) {
  if (bg.dim() == 0) return BackgroundForm::identity(n);
  requireSameDimension(bg.dim(), n);
  return bg;
}

double scaleOf(const Vector& lambda) { return lambda.cwiseAbs().maxCoeff(); }

}  // namespace

BackgroundForm::BackgroundForm(int n, Kind kind, Sampler sampler, Matrix constant)
    : n_(n), kind_(kind), sampler_(std::move(sampler)), constant_(std::move(constant)) {}

BackgroundForm BackgroundForm::identity(int n) {
  return BackgroundForm(n, Kind::Identity, {}, Matrix::identity(n));
}

BackgroundForm BackgroundForm::constant(const Matrix& b) {
  choleskyLower(b);
  return BackgroundForm(b.dim(), Kind::Constant, {}, b);
}

BackgroundForm BackgroundForm::varying(int n, Sampler sampler) {
  requireDimension(n);
  return BackgroundForm(n, Kind::Varying, std::move(sampler), Matrix::identity(n));
}

Matrix BackgroundForm::at(const Point& z) const {
  if (kind_ != Kind::Varying) return constant_;
  Matrix b = sampler_(z);
  requireSameDimension(b.dim(), n_);
  return b;
}

SpectrumVector BackgroundForm::spectrum(const Point& z, const Matrix& a) const {
  requireSameDimension(a.dim(), n_);
  if (kind_ == Kind::Identity) return eigenvalues(a);
  return eigenvalues(a, at(z));
}

Matrix::Dense BackgroundForm::factor(const Point& z) const {
  if (kind_ == Kind::Identity) return Matrix::Dense::Identity(n_, n_);
  return choleskyLower(at(z));
}

std::string_view label(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

ConeFamily ConeFamily::positive(int n, BackgroundForm background) {
  requireDimension(n);
  ConeFamily c;
  c.kind_ = Kind::PositiveCone;
  c.n_ = n;
  c.m_ = n;
  c.name_ = "positive";
  c.background_ = orIdentity(std::move(background), n);
  return c;
}

ConeFamily ConeFamily::gammaM(int n, int m, BackgroundForm background) {
  requireDimension(n);
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "gamma_m needs 1 <= m <= n");
  ConeFamily c;
  c.kind_ = Kind::GammaM;
  c.n_ = n;
  c.m_ = m;
  c.name_ = "gamma_" + std::to_string(m);
  c.background_ = orIdentity(std::move(background), n);
  return c;
}

ConeFamily ConeFamily::mMonge(int n, int m, BackgroundForm background) {
  requireDimension(n);
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "m-Monge-Ampere cone needs 1 <= m <= n");
  ConeFamily c;
  c.kind_ = Kind::MMonge;
  c.n_ = n;
  c.m_ = m;
  c.name_ = "m_monge_" + std::to_string(m);
  c.background_ = orIdentity(std::move(background), n);
  return c;
}

ConeFamily ConeFamily::interp(double a, BackgroundForm background) {
  if (!(a >= 0 && a <= 1)) throw Error(ErrorCode::InvalidArgument, "interpolating cone needs a in [0, 1]");
  ConeFamily c;
  c.kind_ = Kind::Interp;
  c.n_ = 2;
  c.a_ = a;
  c.name_ = "interp";
  c.background_ = orIdentity(std::move(background), 2);
  return c;
}

ConeFamily ConeFamily::whole(int n, BackgroundForm background) {
  requireDimension(n);
  ConeFamily c;
  c.kind_ = Kind::Whole;
  c.n_ = n;
  c.name_ = "whole";
  c.background_ = orIdentity(std::move(background), n);
  return c;
}

ConeFamily ConeFamily::custom(int n, std::string name, DefiningQuantities quantities,
                              BackgroundForm background) {
  requireDimension(n);
  ConeFamily c;
  c.kind_ = Kind::Custom;
  c.n_ = n;
  c.name_ = std::move(name);
  c.custom_ = std::move(quantities);
  c.background_ = orIdentity(std::move(background), n);
  return c;
}

std::vector<double> ConeFamily::definingQuantities(const Vector& lambda) const {
  requireSameDimension(static_cast<int>(lambda.size()), n_);
  const double s = scaleOf(lambda);
  switch (kind_) {
    case Kind::Whole:
      return {};
    case Kind::Custom:
      return custom_(lambda);
    default:
      break;
  }
  if (s == 0) return {0.0};
  switch (kind_) {
    case Kind::PositiveCone:
      return {lambda.minCoeff() / s};
    case Kind::GammaM: {
      const Vector scaled = lambda / s;
      const auto sigma = elementarySymmetricAll(scaled);
      std::vector<double> out;
      for (int q = 1; q <= m_; ++q) out.push_back(sigma(q));
      return out;
    }
    case Kind::MMonge: {
      // The smallest m-fold sum is the sum of the m smallest eigenvalues.
      Vector sorted = lambda;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      return {sorted.head(m_).sum() / s};
    }
    case Kind::Interp:
      return {(lambda(0) + a_ * lambda(1)) / s, (lambda(1) + a_ * lambda(0)) / s};
    default:
      return {};
  }
}

double ConeFamily::margin(const Vector& lambda) const {
  const auto q = definingQuantities(lambda);
  double m = std::numeric_limits<double>::infinity();
  for (double v : q) m = std::min(m, v);
  return m;
}

Membership ConeFamily::classify(const Vector& lambda) const {
  const double m = margin(lambda);
  if (m <= -kBoundaryTolerance) return Membership::Outside;
  if (m < kBoundaryTolerance) return Membership::Indeterminate;
  return Membership::Inside;
}

Membership ConeFamily::classify(const Point& z, const Matrix& a) const {
  requireSameDimension(a.dim(), n_);
  if (kind_ == Kind::Whole) return Membership::Inside;
  return classify(background_.spectrum(z, a).values);
}

bool ConeFamily::contains(const Point& z, const Matrix& a) const {
  return classify(z, a) == Membership::Inside;
}

Point origin(int n) { return Point::Zero(n); }

Matrix randomRelativeTo(const BackgroundForm& bg, const Point& z, std::mt19937_64& rng, double lo, double hi) {
  Matrix a = randomHermitian<double>(bg.dim(), rng, lo, hi);
  if (bg.isIdentity()) return a;
  const Matrix::Dense l = bg.factor(z);
  return a.congruence(l.adjoint());
}

Matrix sampleInCone(const ConeFamily& cone, const Point& z, std::mt19937_64& rng, double minMargin) {
  std::uniform_int_distribution<int> coin(0, 1);
  constexpr int kMaxTries = 10000;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    const bool positive = coin(rng) == 0 || attempt > kMaxTries / 2;
    const Matrix a = positive ? randomRelativeTo(cone.background(), z, rng, 0.05, 4.0)
                              : randomRelativeTo(cone.background(), z, rng, -2.0, 4.0);
    if (cone.kind() == ConeFamily::Kind::Whole) return a;
    const auto lambda = cone.background().spectrum(z, a);
    if (cone.margin(lambda.values) >= minMargin) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "could not sample inside cone " + cone.name());
}

Report checkUnitaryInvariance(const ConeFamily& cone, std::size_t samples, std::uint64_t seed) {
  if (!cone.background().isIdentity()) {
    throw Error(ErrorCode::UnsupportedBackground, "unitary invariance is stated for B = Id");
  }
  const int n = cone.dim();
  struct Outcome {
    bool skipped = false;
    bool disagree = false;
    Membership before{}, after{};
    Matrix a;
  };
  auto outcomes = parallelMap<Outcome>(samples, [&](std::size_t i) {
    std::mt19937_64 rng(mixSeed(seed, i));
    const Matrix a = randomHermitian<double>(n, rng, -2.0, 4.0);
    const auto u = randomUnitary<double>(n, rng);
    const Point z = origin(n);
    Outcome o;
    o.before = cone.classify(z, a);
    o.after = cone.classify(z, a.congruence(u));
    o.skipped = o.before == Membership::Indeterminate || o.after == Membership::Indeterminate;
    o.disagree = !o.skipped && o.before != o.after;
    if (o.disagree) o.a = a;
    return o;
  });

  Report r;
  r.check = "cone_unitary_invariance";
  r.subject = cone.name();
  r.anchor = "A in Gamma iff U^* A U in Gamma for unitary U (B = Id)";
  r.n = n;
  r.samples = samples;
  WitnessCollector wc;
  std::size_t disagreements = 0, skipped = 0, inside = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    skipped += o.skipped;
    inside += o.before == Membership::Inside;
    if (o.disagree) {
      ++disagreements;
      wc.offer({i, 1.0, Json{{"A", toJson(o.a)}, {"before", label(o.before)}, {"after", label(o.after)}}});
    }
  }
  r.maxViolation = static_cast<double>(disagreements);
  r.tolerance = 0;
  r.status = disagreements == 0 ? Status::Pass : Status::Fail;
  r.witnesses = wc.take();
  r.metrics["disagreements"] = disagreements;
  r.metrics["indeterminate_skipped"] = skipped;
  r.metrics["inside_count"] = inside;
  return r;
}

Report checkConvexity(const ConeFamily& cone, std::size_t samples, std::uint64_t seed) {
  const int n = cone.dim();
  constexpr double kTs[] = {0.25, 0.5, 0.75};
  struct Outcome {
    int violations = 0;
    double worst = 0;
    Matrix a, b;
  };
  auto outcomes = parallelMap<Outcome>(samples, [&](std::size_t i) {
    std::mt19937_64 rng(mixSeed(seed, i));
    const Point z = origin(n);
    const Matrix a = sampleInCone(cone, z, rng);
    const Matrix b = sampleInCone(cone, z, rng);
    Outcome o;
    for (double t : kTs) {
      const Matrix mix = a * t + b * (1 - t);
      if (cone.classify(z, mix) != Membership::Inside) {
        ++o.violations;
        const double m = cone.margin(cone.background().spectrum(z, mix).values);
        o.worst = std::max(o.worst, -m);
      }
    }
    if (o.violations) {
      o.a = a;
      o.b = b;
    }
    return o;
  });

  Report r;
  r.check = "cone_convexity";
  r.subject = cone.name();
  r.anchor = "t A + (1 - t) A' in Gamma for A, A' in Gamma";
  r.n = n;
  r.samples = samples;
  WitnessCollector wc;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    violations += o.violations;
    if (o.violations) wc.offer({i, o.worst, Json{{"A", toJson(o.a)}, {"A_tilde", toJson(o.b)}}});
  }
  r.maxViolation = static_cast<double>(violations);
  r.status = violations == 0 ? Status::Pass : Status::Fail;
  r.witnesses = wc.take();
  r.metrics["violations"] = violations;
  return r;
}

}  // namespace hessianlab
