#pragma once

// Machine-readable check reports shared by the CLI and the acceptance suite.

#include <string>
#include <vector>

#include <json.hpp>

namespace qtwist {

struct CheckResult {
  std::string name;
  std::string status;        // "pass" | "fail" | "fail-tolerance"
  double metric = 0.0;       // measured value
  double bound = 0.0;        // the pinned requirement
  std::string paper_anchor;  // stable identifier of the identity family
  std::string detail;        // human-readable measurements
  double seconds = 0.0;
  bool passed() const { return status == "pass"; }
};

// residual-style check: pass iff metric <= bound; small misses are flagged
// as tolerance-related (the --tol 0 regime)
inline std::string residual_status(double metric, double bound) {
  if (metric <= bound) return "pass";
  return metric <= 1e-9 ? "fail-tolerance" : "fail";
}

inline nlohmann::ordered_json to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["status"] = c.status;
  j["metric"] = c.metric;
  j["bound"] = c.bound;
  j["paper_anchor"] = c.paper_anchor;
  if (!c.detail.empty()) j["detail"] = c.detail;
  j["seconds"] = c.seconds;
  return j;
}

struct SuiteReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

inline nlohmann::ordered_json to_json(const SuiteReport& s) {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : s.checks) j["checks"].push_back(to_json(c));
  j["seconds"] = s.seconds;
  j["ok"] = s.ok();
  return j;
}

}  // namespace qtwist
