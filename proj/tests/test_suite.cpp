#include <catch2/catch_amalgamated.hpp>

#include "qtwist/suite.hpp"

using namespace qtwist;

TEST_CASE("a corrupted rule phase makes the rewriter criterion fail") {
  SuiteOptions opts;
  opts.corrupt_phase = true;
  const CheckResult c = criterion_rewriter(opts);
  CHECK(c.status == "fail");
  CHECK(c.metric > 0.0);

  const CheckResult good = criterion_rewriter(SuiteOptions{});
  CHECK(good.passed());
}

TEST_CASE("tol = 0 flags numeric misses as tolerance-related") {
  SuiteOptions opts;
  opts.tol = 0.0;
  const CheckResult c = criterion_fock_residuals(opts);
  CHECK(c.bound == 0.0);
  // residuals are a few ulps, not exact zeros: flagged, not hard-failed
  if (c.metric > 0.0) CHECK(c.status == "fail-tolerance");
}

TEST_CASE("reports serialize with the stable field set") {
  CheckResult c;
  c.name = "x";
  c.status = "pass";
  c.metric = 1.0;
  c.bound = 2.0;
  c.paper_anchor = "anchor";
  const auto j = to_json(c);
  CHECK(j.contains("name"));
  CHECK(j.contains("status"));
  CHECK(j.contains("metric"));
  CHECK(j.contains("bound"));
  CHECK(j.contains("paper_anchor"));
}

TEST_CASE("fast criteria pass at the pinned configurations") {
  // the full battery runs as the dedicated acceptance binary; spot-check the
  // cheap criteria here so unit runs catch regressions early
  CHECK(criterion_ktheory(SuiteOptions{}).passed());
  CHECK(criterion_crossed(SuiteOptions{}).passed());
  CHECK(criterion_matrix_units(SuiteOptions{}).passed());
  CHECK(criterion_faithfulness(SuiteOptions{}).passed());
}
