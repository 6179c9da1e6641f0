#include <catch2/catch_amalgamated.hpp>

#include "nnkkt/network.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace nnkkt;

namespace {
const double kSigmoidAtOne = 0.7310585786300049;
}

TEST_CASE("activation eval reference values") {
  CHECK(Activation::sigmoid().eval(0.0) == 0.5);
  CHECK(Activation::tanh().eval(0.0) == 0.0);
  CHECK_THAT(Activation::sigmoid().eval(1.0), WithinAbs(kSigmoidAtOne, 1e-15));
  CHECK_THAT(Activation::softplus().eval(0.0),
             WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("activation eval stays inside the range") {
  // Large arguments saturate to the boundary in double precision, so the
  // mathematically open range is only closed-verifiable there.
  for (const auto& act : {Activation::sigmoid(), Activation::tanh(),
                          Activation::softplus()}) {
    for (double x : {-745.0, -100.0, -1.0, 0.0, 1.0, 100.0, 745.0}) {
      double y = act.eval(x);
      CHECK(std::isfinite(y));
      CHECK(y >= act.range_low());
      if (std::isfinite(act.range_high())) CHECK(y <= act.range_high());
      if (std::fabs(x) <= 1.0) {
        CHECK(y > act.range_low());
        if (std::isfinite(act.range_high())) CHECK(y < act.range_high());
      }
    }
  }
}

TEST_CASE("activation derivative reference values") {
  CHECK(Activation::sigmoid().derivative(0.0) == 0.25);
  CHECK(Activation::tanh().derivative(0.0) == 1.0);
  CHECK(Activation::softplus().derivative(0.0) == 0.5);
}

TEST_CASE("activation derivative is strictly positive") {
  for (const auto& act : {Activation::sigmoid(), Activation::tanh(),
                          Activation::softplus()}) {
    for (double x : {-700.0, -300.0, -40.0, -2.0, 0.0, 2.0, 40.0, 300.0,
                     700.0}) {
      double d = act.derivative(x);
      CHECK(std::isfinite(d));
      CHECK(d >= 0.0);
      if (std::fabs(x) <= 300.0) CHECK(d > 0.0);
    }
  }
}

TEST_CASE("activation derivative matches central differences") {
  auto rng = oracles::make_rng(101);
  const double h = 1e-5;
  for (const auto& act : {Activation::sigmoid(), Activation::tanh(),
                          Activation::softplus()}) {
    for (int k = 0; k < 1000; ++k) {
      double x = oracles::pick(rng, -10.0, 10.0);
      double numeric = (act.eval(x + h) - act.eval(x - h)) / (2.0 * h);
      double analytic = act.derivative(x);
      CHECK(std::fabs(analytic - numeric) <=
            1e-6 * std::max(1.0, std::fabs(analytic)));
    }
  }
}

TEST_CASE("activation inverse reference values") {
  CHECK(Activation::sigmoid().inverse(0.5) == 0.0);
  CHECK(Activation::tanh().inverse(0.0) == 0.0);
  CHECK_THAT(Activation::sigmoid().inverse(0.7310585786), WithinAbs(1.0, 1e-9));
}

TEST_CASE("activation inverse round trips") {
  auto rng = oracles::make_rng(102);
  for (const auto& act : {Activation::sigmoid(), Activation::tanh(),
                          Activation::softplus()}) {
    double lo = std::isfinite(act.range_low()) ? act.range_low() + 1e-9 : 1e-9;
    double hi = std::isfinite(act.range_high()) ? act.range_high() - 1e-9 : 50.0;
    for (int k = 0; k < 1000; ++k) {
      double y = oracles::pick(rng, lo, hi);
      double back = act.eval(act.inverse(y));
      CHECK(std::fabs(back - y) <= 1e-10);
      CHECK(std::fabs(back - y) <= 1e-12 * std::max(1.0, std::fabs(y)));
    }
  }
}

TEST_CASE("softplus inverse large-argument branch") {
  auto act = Activation::softplus();
  for (double y : {34.5, 40.0, 200.0, 700.0}) {
    double x = act.inverse(y);
    CHECK(std::isfinite(x));
    CHECK(std::fabs(act.eval(x) - y) <= 1e-12 * y);
  }
}

TEST_CASE("activation inverse rejects arguments outside the open range") {
  CHECK_THROWS_AS(Activation::sigmoid().inverse(0.0), OutOfRangeError);
  CHECK_THROWS_AS(Activation::sigmoid().inverse(1.0), OutOfRangeError);
  CHECK_THROWS_AS(Activation::sigmoid().inverse(-0.1), OutOfRangeError);
  CHECK_THROWS_AS(Activation::sigmoid().inverse(1.1), OutOfRangeError);
  CHECK_THROWS_AS(Activation::tanh().inverse(-1.0), OutOfRangeError);
  CHECK_THROWS_AS(Activation::tanh().inverse(1.0), OutOfRangeError);
  CHECK_THROWS_AS(Activation::softplus().inverse(0.0), OutOfRangeError);
  CHECK_THROWS_AS(Activation::softplus().inverse(-1.0), OutOfRangeError);
}

TEST_CASE("activation factory names") {
  CHECK(Activation::from_name("sigmoid").kind() == ActivationKind::sigmoid);
  CHECK(Activation::from_name("tanh").kind() == ActivationKind::tanh);
  CHECK(Activation::from_name("softplus").kind() == ActivationKind::softplus);
  CHECK_THROWS_AS(Activation::from_name("relu"), OutOfRangeError);
  CHECK(std::string(Activation::sigmoid().name()) == "sigmoid");
}

TEST_CASE("network_eval reference values") {
  auto sigmoid = Activation::sigmoid();
  auto zero = NetworkParams::no_hidden({0.0}, 0.0);
  CHECK(network_eval(zero, sigmoid, {0.0}) == 0.5);
  CHECK(network_eval(zero, sigmoid, {7.25}) == 0.5);

  HiddenUnit u1{{0.3}, -0.2, 1.0};
  HiddenUnit u2{{0.3}, -0.2, -1.0};
  auto cancel = NetworkParams::one_hidden({u1, u2});
  CHECK(network_eval(cancel, sigmoid, {0.7}) == 0.0);

  auto unit = NetworkParams::no_hidden({1.0}, 0.0);
  CHECK_THAT(network_eval(unit, sigmoid, {1.0}),
             WithinAbs(kSigmoidAtOne, 1e-15));
}

TEST_CASE("network_eval rejects dimension mismatches") {
  auto params = NetworkParams::no_hidden({1.0}, 0.0);
  CHECK_THROWS_AS(network_eval(params, Activation::sigmoid(), {1.0, 2.0}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(
      network_param_gradient(params, Activation::sigmoid(), {1.0, 2.0}),
      DimensionMismatchError);
}

TEST_CASE("network_param_gradient reference values") {
  auto sigmoid = Activation::sigmoid();
  auto zero = NetworkParams::no_hidden({0.0}, 0.0);
  auto g = network_param_gradient(zero, sigmoid, {0.0});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == 0.25);
  CHECK(g[1] == 0.0);

  auto one = NetworkParams::one_hidden({HiddenUnit{{0.0}, 0.0, 1.0}});
  auto g1 = network_param_gradient(one, sigmoid, {0.0});
  REQUIRE(g1.size() == 3);
  CHECK(g1[0] == 0.25);
  CHECK(g1[1] == 0.0);
  CHECK(g1[2] == 0.5);
}

TEST_CASE("network_param_gradient matches central differences") {
  auto rng = oracles::make_rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    auto arch = trial % 2 == 0 ? Architecture::no_hidden
                               : Architecture::one_hidden;
    int d = oracles::pick_int(rng, 1, 4);
    int n = oracles::pick_int(rng, 1, 3);
    auto params = oracles::random_params(rng, arch, d, n, 2.0);
    auto act = oracles::random_activation(rng);
    auto point = oracles::random_vec(rng, d, -2.0, 2.0);
    auto analytic = network_param_gradient(params, act, point);
    auto numeric = oracles::numeric_gradient(params, act, point, 1e-5);
    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t k = 0; k < analytic.size(); ++k)
      CHECK(oracles::rel_error(analytic[k], numeric[k]) <= 1e-6);
  }
}

TEST_CASE("single-unit one_hidden with a=1 reduces to no_hidden") {
  auto rng = oracles::make_rng(104);
  for (int trial = 0; trial < 20; ++trial) {
    int d = oracles::pick_int(rng, 1, 3);
    auto w = oracles::random_vec(rng, d, -2.0, 2.0);
    double w0 = oracles::pick(rng, -2.0, 2.0);
    auto plain = NetworkParams::no_hidden(w, w0);
    auto lifted = NetworkParams::one_hidden({HiddenUnit{w, w0, 1.0}});
    auto act = oracles::random_activation(rng);
    auto point = oracles::random_vec(rng, d, -2.0, 2.0);
    CHECK(network_eval(plain, act, point) == network_eval(lifted, act, point));
  }
}

TEST_CASE("flatten and unflatten round trip") {
  auto rng = oracles::make_rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    auto arch = trial % 2 == 0 ? Architecture::no_hidden
                               : Architecture::one_hidden;
    int d = oracles::pick_int(rng, 1, 4);
    int n = oracles::pick_int(rng, 1, 3);
    auto params = oracles::random_params(rng, arch, d, n, 3.0);
    auto flat = params.flatten();
    REQUIRE(static_cast<int>(flat.size()) == params.flat_dim());
    auto back = NetworkParams::unflatten(arch, d, params.unit_count(), flat);
    CHECK(back.flatten() == flat);
  }
}

TEST_CASE("flat_dim follows the architecture formula") {
  auto no_hidden = NetworkParams::no_hidden({1.0, 2.0}, 0.0);
  CHECK(no_hidden.flat_dim() == 3);
  std::vector<HiddenUnit> units(3, HiddenUnit{{0.1, 0.2}, 0.0, 1.0});
  auto one_hidden = NetworkParams::one_hidden(units);
  CHECK(one_hidden.flat_dim() == 3 * 3 + 3);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NetworkParams(Architecture::no_hidden,
                                {HiddenUnit{{1.0}, 0.0, 2.0}}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(NetworkParams::one_hidden({HiddenUnit{{1.0}, 0.0, 1.0},
                                             HiddenUnit{{1.0, 2.0}, 0.0, 1.0}}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(NetworkParams::one_hidden({}), DimensionMismatchError);
  CHECK_THROWS_AS(NetworkParams::no_hidden({}, 0.0), DimensionMismatchError);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(NetworkParams::no_hidden({inf}, 0.0),
                  DimensionMismatchError);
  CHECK_THROWS_AS(
      NetworkParams::unflatten(Architecture::no_hidden, 1, 1, {1.0, 2.0, 3.0}),
      DimensionMismatchError);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset({}, {}), EmptyDatasetError);
  CHECK_THROWS_AS(Dataset({{1.0}, {1.0, 2.0}}, {0.0, 0.0}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(Dataset({{1.0}}, {0.0, 0.0}), DimensionMismatchError);
  double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset({{nan}}, {0.0}), DimensionMismatchError);
  CHECK_THROWS_AS(Dataset({{1.0}}, {nan}), DimensionMismatchError);
  Dataset ok({{1.0, 2.0}, {3.0, 4.0}}, {0.5, 0.6});
  CHECK(ok.size() == 2);
  CHECK(ok.dim() == 2);
  CHECK(ok.target(1) == 0.6);
}
