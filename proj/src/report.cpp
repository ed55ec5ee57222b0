#include "hessianlab/report.hpp"

#include <algorithm>
#include <cmath>

namespace hessianlab {

std::string_view label(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::HypothesisViolated: return "hypothesis_violated";
  }
  return "unknown";
}

void WitnessCollector::offer(Witness w) {
  if (kept_.size() < capacity_) {
    kept_.push_back(std::move(w));
    return;
  }
  auto weakest = std::min_element(kept_.begin(), kept_.end(), [](const Witness& a, const Witness& b) {
    return a.violation < b.violation || (a.violation == b.violation && a.index > b.index);
  });
  if (w.violation > weakest->violation) *weakest = std::move(w);
}

std::vector<Witness> WitnessCollector::take() const {
  std::vector<Witness> out = kept_;
  std::sort(out.begin(), out.end(), [](const Witness& a, const Witness& b) { return a.index < b.index; });
  return out;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json toJson(const Point& z) {
  Json arr = Json::array();
  for (int i = 0; i < z.size(); ++i) arr.push_back(Json::array({number(z(i).real()), number(z(i).imag())}));
  return arr;
}

Json toJson(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(number(v(i)));
  return arr;
}

Json toJson(const Matrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.dim(); ++j) row.push_back(Json::array({number(a(i, j).real()), number(a(i, j).imag())}));
    rows.push_back(row);
  }
  return rows;
}

Json toJson(const Report& r) {
  Json j;
  j["check"] = r.check;
  j["subject"] = r.subject;
  j["anchor"] = r.anchor;
  j["n"] = r.n;
  j["samples"] = r.samples;
  j["max_violation"] = number(r.maxViolation);
  j["tolerance"] = number(r.tolerance);
  j["status"] = std::string(label(r.status));
  j["pass"] = r.pass();
  j["expect_fail"] = r.expectFail;
  j["as_expected"] = r.asExpected();
  j["metrics"] = r.metrics;
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    Json wj;
    wj["index"] = w.index;
    wj["violation"] = number(w.violation);
    wj["data"] = w.data;
    ws.push_back(wj);
  }
  j["witnesses"] = ws;
  j["notes"] = r.notes;
  return j;
}

}  // namespace hessianlab
