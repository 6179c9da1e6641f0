#include <catch2/catch_amalgamated.hpp>
#include <variant>

#include "nnkkt/linprog.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace nnkkt;

namespace {

double raw_residual(const StandardLP& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < lp.rows; ++i) {
    double v = -lp.rhs[i];
    for (int j = 0; j < lp.cols; ++j) v += lp.at(i, j) * x[j];
    worst = std::max(worst, std::fabs(v));
  }
  return worst;
}

double max_row_norm(const StandardLP& lp) {
  double worst = 0.0;
  for (int i = 0; i < lp.rows; ++i)
    for (int j = 0; j < lp.cols; ++j)
      worst = std::max(worst, std::fabs(lp.at(i, j)));
  return worst;
}

}  // namespace

TEST_CASE("single-variable feasible system") {
  StandardLP lp = StandardLP::make(1, 1);
  lp.at(0, 0) = 1.0;
  lp.rhs[0] = 1.0;
  lp.upper[0] = 2.0;
  auto result = lp_phase1_feasible(lp);
  auto* feas = std::get_if<LpFeasible>(&result);
  REQUIRE(feas != nullptr);
  CHECK_THAT(feas->x[0], WithinAbs(1.0, 1e-12));
  CHECK(feas->residual_inf <= kLpFeasTol);
}

TEST_CASE("single-variable infeasible system carries a Farkas certificate") {
  StandardLP lp = StandardLP::make(1, 1);
  lp.at(0, 0) = 1.0;
  lp.rhs[0] = 3.0;
  lp.upper[0] = 2.0;
  auto result = lp_phase1_feasible(lp);
  auto* cert = std::get_if<LpInfeasible>(&result);
  REQUIRE(cert != nullptr);
  CHECK_THAT(cert->farkas[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(cert->gap, WithinAbs(1.0, 1e-9));
  CHECK(cert->sign_defect <= 1e-9);
  auto audit = oracles::check_farkas(lp, cert->farkas);
  CHECK_THAT(audit.gap, WithinAbs(cert->gap, 1e-12));
  CHECK_THAT(audit.y_norm, WithinAbs(1.0, 1e-12));
}

TEST_CASE("negative right side drives the signed artificial branch") {
  StandardLP lp = StandardLP::make(1, 2);
  lp.at(0, 0) = 1.0;
  lp.at(0, 1) = -1.0;
  lp.rhs[0] = -3.0;
  lp.upper[0] = 10.0;
  lp.upper[1] = 10.0;
  auto result = lp_phase1_feasible(lp);
  auto* feas = std::get_if<LpFeasible>(&result);
  REQUIRE(feas != nullptr);
  CHECK_THAT(feas->x[0] - feas->x[1], WithinAbs(-3.0, 1e-9));
}

TEST_CASE("construct-then-solve fuzz stays feasible") {
  auto rng = oracles::make_rng(301);
  for (int trial = 0; trial < 50; ++trial) {
    int m = oracles::pick_int(rng, 1, 6);
    int q = oracles::pick_int(rng, m, 12);
    StandardLP lp = StandardLP::make(m, q);
    std::vector<double> xstar(q);
    for (int j = 0; j < q; ++j) {
      switch (oracles::pick_int(rng, 0, 2)) {
        case 0:  // [0, u]
          lp.upper[j] = oracles::pick(rng, 0.5, 3.0);
          xstar[j] = oracles::pick(rng, 0.0, lp.upper[j]);
          break;
        case 1:  // [l, inf)
          lp.lower[j] = oracles::pick(rng, -2.0, 0.0);
          xstar[j] = lp.lower[j] + oracles::pick(rng, 0.0, 2.0);
          break;
        default:  // free
          lp.lower[j] = -kInfinity;
          xstar[j] = oracles::pick(rng, -2.0, 2.0);
          break;
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < q; ++j) lp.at(i, j) = oracles::pick(rng, -2.0, 2.0);
      double b = 0.0;
      for (int j = 0; j < q; ++j) b += lp.at(i, j) * xstar[j];
      lp.rhs[i] = b;
    }
    auto result = lp_phase1_feasible(lp);
    auto* feas = std::get_if<LpFeasible>(&result);
    REQUIRE(feas != nullptr);
    CHECK(feas->residual_inf <= kLpFeasTol);
    CHECK(raw_residual(lp, feas->x) <= kLpFeasTol * (1.0 + max_row_norm(lp)));
    for (int j = 0; j < q; ++j) {
      CHECK(feas->x[j] >= lp.lower[j] - 1e-12);
      CHECK(feas->x[j] <= lp.upper[j] + 1e-12);
    }
  }
}

TEST_CASE("infeasible constructions yield validating certificates") {
  auto rng = oracles::make_rng(302);

  SECTION("conflicting duplicate rows") {
    for (int trial = 0; trial < 20; ++trial) {
      int q = oracles::pick_int(rng, 2, 6);
      StandardLP lp = StandardLP::make(2, q);
      for (int j = 0; j < q; ++j) {
        lp.upper[j] = 5.0;
        double c = oracles::pick(rng, -2.0, 2.0);
        lp.at(0, j) = c;
        lp.at(1, j) = c;
      }
      lp.rhs[0] = 1.0;
      lp.rhs[1] = 2.0;
      auto result = lp_phase1_feasible(lp);
      auto* cert = std::get_if<LpInfeasible>(&result);
      REQUIRE(cert != nullptr);
      auto audit = oracles::check_farkas(lp, cert->farkas);
      CHECK_THAT(audit.y_norm, WithinAbs(1.0, 1e-12));
      CHECK(audit.gap > kLpFeasTol);
      CHECK(audit.sign_defect <= 1e-7);
    }
  }

  SECTION("zero row with nonzero right side") {
    StandardLP lp = StandardLP::make(2, 2);
    lp.at(0, 0) = 1.0;
    lp.at(0, 1) = 1.0;
    lp.rhs[0] = 1.0;
    lp.rhs[1] = 1.0;  // 0x = 1, also exercises the zero-row scale guard
    lp.upper[0] = lp.upper[1] = 2.0;
    auto result = lp_phase1_feasible(lp);
    auto* cert = std::get_if<LpInfeasible>(&result);
    REQUIRE(cert != nullptr);
    auto audit = oracles::check_farkas(lp, cert->farkas);
    CHECK(audit.gap > kLpFeasTol);
    CHECK(audit.sign_defect <= 1e-9);
  }
}

TEST_CASE("lp_minimize reaches the documented optima") {
  SECTION("maximize x against a slack row") {
    StandardLP lp = StandardLP::make(1, 2);
    lp.at(0, 0) = 1.0;
    lp.at(0, 1) = 1.0;
    lp.rhs[0] = 2.0;
    lp.cost[0] = -1.0;
    auto result = lp_minimize(lp);
    auto* opt = std::get_if<LpOptimum>(&result);
    REQUIRE(opt != nullptr);
    CHECK_THAT(opt->x[0], WithinAbs(2.0, 1e-9));
    CHECK_THAT(opt->objective, WithinAbs(-2.0, 1e-9));
  }

  SECTION("upper bound binds before the row does") {
    StandardLP lp = StandardLP::make(1, 2);
    lp.at(0, 0) = 1.0;
    lp.at(0, 1) = 1.0;
    lp.rhs[0] = 10.0;
    lp.upper[0] = 5.0;
    lp.cost[0] = -1.0;
    auto result = lp_minimize(lp);
    auto* opt = std::get_if<LpOptimum>(&result);
    REQUIRE(opt != nullptr);
    CHECK_THAT(opt->x[0], WithinAbs(5.0, 1e-9));
    CHECK_THAT(opt->x[1], WithinAbs(5.0, 1e-9));
  }

  SECTION("box-constrained simplex face") {
    StandardLP lp = StandardLP::make(1, 2);
    lp.at(0, 0) = 1.0;
    lp.at(0, 1) = 1.0;
    lp.rhs[0] = 1.0;
    lp.upper[0] = lp.upper[1] = 1.0;
    lp.cost[0] = lp.cost[1] = 1.0;
    auto result = lp_minimize(lp);
    auto* opt = std::get_if<LpOptimum>(&result);
    REQUIRE(opt != nullptr);
    CHECK_THAT(opt->objective, WithinAbs(1.0, 1e-9));
  }

  SECTION("infeasible minimization returns the certificate") {
    StandardLP lp = StandardLP::make(1, 1);
    lp.at(0, 0) = 1.0;
    lp.rhs[0] = 3.0;
    lp.upper[0] = 2.0;
    lp.cost[0] = 1.0;
    auto result = lp_minimize(lp);
    CHECK(std::holds_alternative<LpInfeasible>(result));
  }
}

TEST_CASE("unbounded ray raises") {
  StandardLP lp = StandardLP::make(1, 2);
  lp.at(0, 0) = 1.0;
  lp.at(0, 1) = -1.0;
  lp.lower[0] = -kInfinity;
  lp.lower[1] = -kInfinity;
  lp.cost[0] = -1.0;
  CHECK_THROWS_AS(lp_minimize(lp), UnboundedError);
}

TEST_CASE("lp validation rejects malformed inputs") {
  CHECK_THROWS_AS(lp_phase1_feasible(StandardLP::make(0, 1)),
                  DimensionMismatchError);
  {
    StandardLP lp = StandardLP::make(1, 1);
    lp.lower[0] = 2.0;
    lp.upper[0] = 1.0;
    CHECK_THROWS_AS(lp_phase1_feasible(lp), DimensionMismatchError);
  }
  {
    StandardLP lp = StandardLP::make(1, 1);
    lp.entries[0] = std::nan("");
    CHECK_THROWS_AS(lp_phase1_feasible(lp), DimensionMismatchError);
  }
  {
    StandardLP lp = StandardLP::make(1, 1);
    lp.rhs[0] = kInfinity;
    CHECK_THROWS_AS(lp_phase1_feasible(lp), DimensionMismatchError);
  }
  {
    StandardLP lp = StandardLP::make(1, 1);
    lp.rhs.pop_back();
    CHECK_THROWS_AS(lp_phase1_feasible(lp), DimensionMismatchError);
  }
}

TEST_CASE("identical inputs produce identical solutions") {
  auto rng = oracles::make_rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    int m = oracles::pick_int(rng, 1, 4);
    int q = oracles::pick_int(rng, m, 8);
    StandardLP lp = StandardLP::make(m, q);
    for (int j = 0; j < q; ++j) lp.upper[j] = 4.0;
    std::vector<double> xstar(q);
    for (int j = 0; j < q; ++j) xstar[j] = oracles::pick(rng, 0.0, 4.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < q; ++j) lp.at(i, j) = oracles::pick(rng, -1.0, 1.0);
      double b = 0.0;
      for (int j = 0; j < q; ++j) b += lp.at(i, j) * xstar[j];
      lp.rhs[i] = b;
    }
    auto r1 = lp_phase1_feasible(lp);
    auto r2 = lp_phase1_feasible(lp);
    auto* f1 = std::get_if<LpFeasible>(&r1);
    auto* f2 = std::get_if<LpFeasible>(&r2);
    REQUIRE(f1 != nullptr);
    REQUIRE(f2 != nullptr);
    CHECK(f1->x == f2->x);
  }
}
