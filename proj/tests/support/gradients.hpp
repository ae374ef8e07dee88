#pragma once

// Finite-difference oracles for the policy gradient paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wslice/episode.hpp"
#include "wslice/policy.hpp"
#include "wslice/rng.hpp"
#include "wslice/training.hpp"

namespace wslice::testing {

struct GradientComparison {
  std::vector<double> analytic;
  std::vector<double> numeric;

  /// Largest |a - n| / max(|a|, |n|, atol) over the compared entries.
  [[nodiscard]] double max_rel_error(double atol) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
      const double scale = std::max({std::abs(analytic[k]), std::abs(numeric[k]), atol});
      worst = std::max(worst, std::abs(analytic[k] - numeric[k]) / scale);
    }
    return worst;
  }
};

/// Input with entries bounded away from zero so ReLU kinks are rare.
inline PolicyInput smooth_input(Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  PolicyInput x;
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
  return x;
}

inline std::vector<Eigen::Index> random_indices(Rng& rng, Eigen::Index size, int count) {
  std::uniform_int_distribution<Eigen::Index> pick(0, size - 1);
  std::vector<Eigen::Index> out;
  for (int k = 0; k < count; ++k) out.push_back(pick(rng));
  return out;
}

/// backward() against central differences of dot(d, logits) for random
/// parameters, random inputs and random output weights.
inline GradientComparison compare_backward(std::uint64_t seed, int num_params, int num_inputs, double step = 1e-6) {
  auto rng = make_rng(seed, SeedTag::kInit, 7);
  const PolicyParams params = init_params(rng);
  const Eigen::VectorXd flat = params.flatten();
  std::normal_distribution<double> normal(0.0, 1.0);
  GradientComparison out;
  for (int n = 0; n < num_inputs; ++n) {
    const PolicyInput x = smooth_input(rng);
    const Logits d{normal(rng), normal(rng), normal(rng)};
    const auto fwd = forward(params, x);
    const Eigen::VectorXd grad = backward(params, fwd.cache, d).flatten();
    for (Eigen::Index k : random_indices(rng, flat.size(), num_params)) {
      Eigen::VectorXd plus = flat, minus = flat;
      plus[k] += step;
      minus[k] -= step;
      const double fp = d.dot(forward(PolicyParams::unflatten(plus), x).logits);
      const double fm = d.dot(forward(PolicyParams::unflatten(minus), x).logits);
      out.analytic.push_back(grad[k]);
      out.numeric.push_back((fp - fm) / (2.0 * step));
    }
  }
  return out;
}

/// Logit-space finite differences chained through backward() against direct
/// central differences of the window Lagrangian in parameter space.
inline GradientComparison compare_chained_gradient(const NetworkRealization& realization, int window,
                                                   const DualMultipliers& lambda, std::uint64_t seed,
                                                   int num_params, double logit_epsilon, double param_step) {
  const Episode ep(realization);
  auto world = ep.initial_world();
  std::vector<double> estimates(realization.flows.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) estimates[i] = realization.flows[i].mu_init;
  for (int t = 0; t < window; ++t) {
    const auto m = simulate_window(realization, t, SliceAllocation::uniform(), world, ep.arrivals(t), ep.channel(t));
    estimates = m.arrival_rates(realization.config);
  }
  const auto arrivals = ep.arrivals(window);
  const auto channel = ep.channel(window);
  const WindowContext ctx{realization, window, world, arrivals, channel};

  auto rng = make_rng(seed, SeedTag::kInit, 8);
  const PolicyParams params = init_params(rng);
  const PolicyInput x = make_policy_input(build_state_vector(realization, estimates), lambda);
  const auto fwd = forward(params, x);
  const Eigen::VectorXd grad =
      backward(params, fwd.cache, estimate_logit_gradient(ctx, fwd.logits, lambda, logit_epsilon)).flatten();

  const Eigen::VectorXd flat = params.flatten();
  GradientComparison out;
  // Output-layer entries always reach the logits, so none of the comparisons is vacuous.
  const auto& last = params.layers.back();
  const Eigen::Index tail = last.weight.size() + last.bias.size();
  for (Eigen::Index k : random_indices(rng, tail, num_params)) {
    k += flat.size() - tail;
    Eigen::VectorXd plus = flat, minus = flat;
    plus[k] += param_step;
    minus[k] -= param_step;
    const double lp = window_lagrangian(ctx, forward(PolicyParams::unflatten(plus), x).allocation, lambda);
    const double lm = window_lagrangian(ctx, forward(PolicyParams::unflatten(minus), x).allocation, lambda);
    out.analytic.push_back(grad[k]);
    out.numeric.push_back((lp - lm) / (2.0 * param_step));
  }
  return out;
}

}  // namespace wslice::testing
