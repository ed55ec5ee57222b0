#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "hessianlab/hermitian.hpp"

namespace hessianlab {

using Json = nlohmann::ordered_json;

enum class Status { Pass, Fail, HypothesisViolated };

std::string_view label(Status s);

struct Witness {
  std::size_t index = 0;
  double violation = 0;
  Json data;
};

/// Outcome of one verification check.
///
/// `maxViolation` is compared against `tolerance`; `witnesses` keeps the worst
/// offenders (ordered by sample index for reproducibility). `metrics` carries
/// check-specific numbers such as the margin or the realized epsilon.
struct Report {
  std::string check;
  std::string subject;
  std::string anchor;
  int n = 0;
  std::size_t samples = 0;
  double maxViolation = 0;
  double tolerance = 0;
  Status status = Status::Pass;
  bool expectFail = false;
  std::vector<Witness> witnesses;
  Json metrics = Json::object();
  std::vector<std::string> notes;

  bool pass() const { return status == Status::Pass; }
  /// True when the outcome matches expectations (a failure expected to fail counts).
  bool asExpected() const { return expectFail ? status == Status::Fail : pass(); }
};

/// Keeps the `capacity` largest violations, reported in index order.
class WitnessCollector {
 public:
  explicit WitnessCollector(std::size_t capacity = 8) : capacity_(capacity) {}
  void offer(Witness w);
  std::vector<Witness> take() const;

 private:
  std::size_t capacity_;
  std::vector<Witness> kept_;
};

Json toJson(const Point& z);
Json toJson(const Matrix& a);
Json toJson(const Vector& v);
Json toJson(const Report& r);

/// Doubles are emitted with round-trip precision; infinities and NaN as strings.
Json number(double x);

}  // namespace hessianlab
