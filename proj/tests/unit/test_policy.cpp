#include <cmath>

#include "doctest.h"
#include "gradients.hpp"
#include "wslice/adam.hpp"
#include "wslice/policy.hpp"
#include "wslice/rng.hpp"

using namespace wslice;
using namespace wslice::testing;

TEST_SUITE("policy") {
  TEST_CASE("zero parameters give the uniform allocation") {
    const auto fwd = forward(PolicyParams::zeros(), PolicyInput::Constant(0.3));
    CHECK(fwd.logits.isZero());
    CHECK(fwd.allocation.p_h == doctest::Approx(1.0 / 3.0));
    CHECK(fwd.allocation.p_b == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("softmax by hand") {
    const auto a = softmax_allocation(Logits{std::log(2.0), 0.0, 0.0});
    CHECK(a.p_h == doctest::Approx(0.5));
    CHECK(a.p_l == doctest::Approx(0.25));
    CHECK(a.p_b == doctest::Approx(0.25));
    const auto big = softmax_allocation(Logits{1000.0, 0.0, -1000.0});
    CHECK(big.p_h == doctest::Approx(1.0));
    CHECK(big.is_valid());
  }

  TEST_CASE("allocations always lie on the simplex") {
    auto rng = make_rng(3, SeedTag::kInit);
    for (int k = 0; k < 50; ++k) {
      const auto params = init_params(rng);
      const auto fwd = forward(params, smooth_input(rng) * 10.0);
      CHECK(fwd.allocation.is_valid(1e-12));
    }
  }

  TEST_CASE("policy input carries the state and compressed multipliers") {
    NetworkStateVector s;
    for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] = 0.1 * static_cast<double>(k);
    const auto x = make_policy_input(s, {1.0, 3.0});
    CHECK(x[4] == doctest::Approx(0.4));
    CHECK(x[9] == doctest::Approx(std::log(2.0)));
    CHECK(x[10] == doctest::Approx(std::log(4.0)));
  }

  TEST_CASE("backward is linear in the output gradient") {
    auto rng = make_rng(4, SeedTag::kInit);
    const auto params = init_params(rng);
    const auto fwd = forward(params, smooth_input(rng));
    CHECK(backward(params, fwd.cache, Logits::Zero()).flatten().isZero());
    const Logits d{0.3, -1.2, 0.7};
    const auto g1 = backward(params, fwd.cache, d).flatten();
    const auto g3 = backward(params, fwd.cache, 3.0 * d).flatten();
    CHECK((g3 - 3.0 * g1).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("backward matches finite differences") {
    const auto cmp = compare_backward(1, 20, 20);
    CHECK(cmp.analytic.size() == 400);
    CHECK(cmp.max_rel_error(1e-8) < 1e-4);
  }

  TEST_CASE("initialization") {
    auto a = make_rng(5, SeedTag::kInit);
    auto b = make_rng(5, SeedTag::kInit);
    const auto p = init_params(a);
    CHECK(p.has_expected_shapes());
    CHECK(p.flatten() == init_params(b).flatten());
    for (std::size_t l = 0; l < kNumLayers; ++l) {
      const auto& layer = p.layers[l];
      CHECK(layer.bias.isZero());
      const double limit = std::sqrt(6.0 / kLayerWidths[l]);
      CHECK(layer.weight.cwiseAbs().maxCoeff() <= limit);
      CHECK(layer.weight.rows() == kLayerWidths[l + 1]);
      CHECK(layer.weight.cols() == kLayerWidths[l]);
    }
  }

  TEST_CASE("flatten round-trips and arithmetic") {
    auto rng = make_rng(6, SeedTag::kInit);
    const auto p = init_params(rng);
    const auto flat = p.flatten();
    CHECK(static_cast<std::size_t>(flat.size()) == p.num_parameters());
    CHECK(PolicyParams::unflatten(flat).flatten() == flat);
    CHECK_THROWS(PolicyParams::unflatten(Eigen::VectorXd::Zero(5)));
    auto q = p;
    q += p;
    q *= 0.5;
    CHECK((q.flatten() - flat).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("invalid inputs are rejected") {
    PolicyInput x = PolicyInput::Zero();
    x[3] = std::nan("");
    CHECK_THROWS(forward(PolicyParams::zeros(), x));
    PolicyParams bad = PolicyParams::zeros();
    bad.layers[1].bias.resize(3);
    CHECK_THROWS(forward(bad, PolicyInput::Zero()));
  }

  TEST_CASE("Adam moves against the gradient") {
    Adam adam(2, {0.1, 0.9, 0.999, 1e-8});
    Eigen::VectorXd x(2);
    x << 1.0, -1.0;
    const Eigen::VectorXd g = x;
    adam.step(x, g);
    // The first step has magnitude lr per coordinate.
    CHECK(x[0] == doctest::Approx(0.9));
    CHECK(x[1] == doctest::Approx(-0.9));
    CHECK(adam.iterations() == 1);
  }
}
