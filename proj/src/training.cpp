#include "wslice/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "wslice/channel.hpp"
#include "wslice/execution.hpp"
#include "wslice/parallel.hpp"
#include "wslice/traffic.hpp"

namespace wslice {

std::vector<std::string> validate_train_config(const TrainConfig& c) {
  std::vector<std::string> errors;
  if (c.num_epochs < 0) errors.emplace_back("num_epochs must be nonnegative");
  if (c.batch_size < 1) errors.emplace_back("batch_size must be positive");
  if (!(c.learning_rate >= 0.0)) errors.emplace_back("learning_rate must be nonnegative");
  if (!(c.lr_final_fraction >= 0.0 && c.lr_final_fraction <= 1.0))
    errors.emplace_back("lr_final_fraction must lie in [0, 1]");
  if (!(c.dual_step_pd >= 0.0)) errors.emplace_back("dual_step_pd must be nonnegative");
  if (!(c.dual_step > 0.0)) errors.emplace_back("dual_step must be positive");
  if (!c.lambda_max_init.is_nonnegative()) errors.emplace_back("lambda_max_init must be nonnegative");
  if (!(c.fd_epsilon > 0.0)) errors.emplace_back("fd_epsilon must be positive");
  if (!(c.lambda_max_quantile >= 0.0 && c.lambda_max_quantile <= 1.0))
    errors.emplace_back("lambda_max_quantile must lie in [0, 1]");
  if (c.num_train < 1) errors.emplace_back("num_train must be positive");
  if (c.num_val < 1) errors.emplace_back("num_val must be positive");
  if (c.num_test < 1) errors.emplace_back("num_test must be positive");
  if (c.threads < 1) errors.emplace_back("threads must be positive");
  return errors;
}

std::array<int, kNumSlices> sample_composition(int total, Rng& rng) {
  if (total < 3) throw std::invalid_argument("need at least three flows for three SLA categories");
  // Stars and bars: two distinct cut points in {1, ..., total-1}, uniform over unordered pairs.
  std::uniform_int_distribution<int> cut(1, total - 1);
  int a = cut(rng);
  int b = cut(rng);
  while (b == a) b = cut(rng);
  if (a > b) std::swap(a, b);
  return {a, b - a, total - b};
}

std::vector<NetworkRealization> sample_realizations(int count, const NetworkConfig& config, Rng& rng) {
  if (count < 1) throw std::invalid_argument("need at least one realization");
  require_valid(config);
  std::vector<NetworkRealization> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed = rng();
    NetworkRealization r;
    r.config = config;
    r.traffic_seed = derive_seed(seed, SeedTag::kTraffic);
    r.channel_seed = derive_seed(seed, SeedTag::kChannel);

    auto comp_rng = make_rng(seed, SeedTag::kComposition);
    const auto counts = sample_composition(config.num_flows, comp_rng);
    int id = 0;
    for (std::size_t s = 0; s < kNumSlices; ++s) {
      for (int j = 0; j < counts[s]; ++j) r.flows.push_back(FlowSpec{id++, kAllSlas[s], 1.0, 0.0});
    }

    auto snr_rng = make_rng(seed, SeedTag::kMeanSnr);
    const auto snrs = sample_mean_snrs(r.flows.size(), snr_rng, config.mean_snr_db);
    auto rate_rng = make_rng(seed, SeedTag::kInitRate);
    const auto mu = init_rates(r, rate_rng);
    for (std::size_t i = 0; i < r.flows.size(); ++i) {
      r.flows[i].mean_snr_db = snrs[i];
      r.flows[i].mu_init = mu[i];
    }
    out.push_back(std::move(r));
  }
  return out;
}

RealizationSets make_realization_sets(std::uint64_t root_seed, const NetworkConfig& config, int num_train,
                                      int num_val, int num_test) {
  RealizationSets sets;
  auto train_rng = make_rng(root_seed, SeedTag::kTrainSet);
  auto val_rng = make_rng(root_seed, SeedTag::kValidationSet);
  if (num_train > 0) sets.train = sample_realizations(num_train, config, train_rng);
  if (num_val > 0) sets.validation = sample_realizations(num_val, config, val_rng);
  if (num_test > 0) sets.test = make_test_set(root_seed, config, num_test);
  return sets;
}

std::vector<NetworkRealization> make_test_set(std::uint64_t root_seed, const NetworkConfig& config, int num_test) {
  auto rng = make_rng(root_seed, SeedTag::kTestSet);
  return sample_realizations(num_test, config, rng);
}

double window_lagrangian(const WindowContext& ctx, const SliceAllocation& allocation, const DualMultipliers& lambda) {
  WorldState world = ctx.world;
  const auto metrics = simulate_window(ctx.realization, ctx.window, allocation, world, ctx.arrivals, ctx.channel);
  return lagrangian_term(evaluate_window(metrics, ctx.realization.config.qos, ctx.realization.flows), lambda);
}

Logits estimate_logit_gradient(const WindowContext& ctx, const Logits& logits, const DualMultipliers& lambda,
                               double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  Logits grad;
  for (int k = 0; k < 3; ++k) {
    Logits plus = logits;
    Logits minus = logits;
    plus[k] += epsilon;
    minus[k] -= epsilon;
    const double l_plus = window_lagrangian(ctx, softmax_allocation(plus), lambda);
    const double l_minus = window_lagrangian(ctx, softmax_allocation(minus), lambda);
    grad[k] = (l_plus - l_minus) / (2.0 * epsilon);
  }
  return grad;
}

EpisodeGradient episode_gradient(const Episode& episode, const PolicyParams& params, const DualMultipliers& lambda,
                                 double epsilon) {
  const auto& r = episode.realization();
  EpisodeGradient out{PolicyParams::zeros(), 0.0, {}};
  WorldState world = episode.initial_world();
  std::vector<double> estimates(r.flows.size());
  for (std::size_t i = 0; i < r.flows.size(); ++i) estimates[i] = r.flows[i].mu_init;

  const int horizon = episode.num_windows();
  for (int t = 0; t < horizon; ++t) {
    const auto state = build_state_vector(r, estimates);
    const auto fwd = forward(params, make_policy_input(state, lambda));
    const auto arrivals = episode.arrivals(t);
    const auto channel = episode.channel(t);
    const WindowContext ctx{r, t, world, arrivals, channel};
    const Logits d_logits = estimate_logit_gradient(ctx, fwd.logits, lambda, epsilon);
    out.gradient += backward(params, fwd.cache, d_logits);

    const auto metrics = simulate_window(r, t, fwd.allocation, world, arrivals, channel);
    const auto eval = evaluate_window(metrics, r.config.qos, r.flows);
    out.lagrangian += lagrangian_term(eval, lambda);
    out.mean.objective += eval.objective;
    out.mean.constraints.f_h += eval.constraints.f_h;
    out.mean.constraints.f_l += eval.constraints.f_l;
    estimates = metrics.arrival_rates(r.config);
  }
  const double inv = 1.0 / horizon;
  out.gradient *= inv;
  out.lagrangian *= inv;
  out.mean.objective *= inv;
  out.mean.constraints.f_h *= inv;
  out.mean.constraints.f_l *= inv;
  return out;
}

EpisodeGradient batch_gradient(std::span<const Episode> episodes, std::span<const DualMultipliers> lambdas,
                               const PolicyParams& params, double epsilon, int threads) {
  if (episodes.empty() || episodes.size() != lambdas.size())
    throw std::invalid_argument("batch needs one multiplier per episode");
  std::vector<EpisodeGradient> parts(episodes.size());
  parallel_for(episodes.size(), threads,
               [&](std::size_t b) { parts[b] = episode_gradient(episodes[b], params, lambdas[b], epsilon); });

  EpisodeGradient total{PolicyParams::zeros(), 0.0, {}};
  for (const auto& p : parts) {
    total.gradient += p.gradient;
    total.lagrangian += p.lagrangian;
    total.mean.objective += p.mean.objective;
    total.mean.constraints.f_h += p.mean.constraints.f_h;
    total.mean.constraints.f_l += p.mean.constraints.f_l;
  }
  const double inv = 1.0 / static_cast<double>(parts.size());
  total.gradient *= inv;
  total.lagrangian *= inv;
  total.mean.objective *= inv;
  total.mean.constraints.f_h *= inv;
  total.mean.constraints.f_l *= inv;
  return total;
}

ValidationSummary validate_online(const PolicyParams& params, std::span<const Episode> episodes, double eta_lambda,
                                  int threads) {
  std::vector<Trajectory> runs(episodes.size());
  parallel_for(episodes.size(), threads,
               [&](std::size_t i) { runs[i] = run_online(params, episodes[i], eta_lambda); });
  ValidationSummary s;
  for (const auto& traj : runs) {
    const auto m = max_dual(traj);
    s.run_max.push_back(m);
    s.max_dual.lambda_h = std::max(s.max_dual.lambda_h, m.lambda_h);
    s.max_dual.lambda_l = std::max(s.max_dual.lambda_l, m.lambda_l);
    const auto e = mean_evaluation(traj);
    s.mean.objective += e.objective;
    s.mean.constraints.f_h += e.constraints.f_h;
    s.mean.constraints.f_l += e.constraints.f_l;
  }
  if (!runs.empty()) {
    const double inv = 1.0 / static_cast<double>(runs.size());
    s.mean.objective *= inv;
    s.mean.constraints.f_h *= inv;
    s.mean.constraints.f_l *= inv;
  }
  return s;
}

DualMultipliers ValidationSummary::dual_quantile(double q) const {
  if (run_max.empty()) return max_dual;
  auto quantile = [&](auto member) {
    std::vector<double> v;
    v.reserve(run_max.size());
    for (const auto& d : run_max) v.push_back(d.*member);
    std::sort(v.begin(), v.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {quantile(&DualMultipliers::lambda_h), quantile(&DualMultipliers::lambda_l)};
}

DualMultipliers lambda_max_from(const DualMultipliers& observed_max, const TrainConfig& c) noexcept {
  return {std::max(c.lambda_max_floor, c.lambda_max_margin * observed_max.lambda_h),
          std::max(c.lambda_max_floor, c.lambda_max_margin * observed_max.lambda_l)};
}

namespace {

std::vector<Episode> make_episodes(std::span<const NetworkRealization> set) {
  std::vector<Episode> out;
  out.reserve(set.size());
  for (const auto& r : set) out.emplace_back(r);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_finite(const EpisodeGradient& g) {
  if (!std::isfinite(g.lagrangian)) throw TrainingDiverged("empirical Lagrangian is not finite");
  if (!g.gradient.all_finite()) throw TrainingDiverged("Lagrangian gradient is not finite");
}

void require_train_config(const TrainConfig& config) {
  const auto errors = validate_train_config(config);
  if (errors.empty()) return;
  std::string msg = "invalid training config:";
  for (const auto& e : errors) msg += "\n  - " + e;
  throw ConfigError(msg);
}

}  // namespace

DualMultipliers calibrate_lambda_max(const PolicyParams& params, std::span<const NetworkRealization> val_set,
                                     const TrainConfig& config) {
  const auto episodes = make_episodes(val_set);
  return lambda_max_from(
      validate_online(params, episodes, config.dual_step, config.threads).dual_quantile(config.lambda_max_quantile), config);
}

double scheduled_learning_rate(const TrainConfig& c, long long step, long long total_steps) noexcept {
  if (c.lr_final_fraction >= 1.0 || total_steps <= 1) return c.learning_rate;
  const double progress = std::clamp(static_cast<double>(step) / static_cast<double>(total_steps - 1), 0.0, 1.0);
  const double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  return c.learning_rate * (c.lr_final_fraction + (1.0 - c.lr_final_fraction) * cosine);
}

PolicyParams initial_params(const TrainConfig& config) {
  auto rng = make_rng(config.seed, SeedTag::kInit);
  return init_params(rng);
}

TrainResult train_state_augmented(std::span<const NetworkRealization> train_set,
                                  std::span<const NetworkRealization> val_set, const TrainConfig& config,
                                  const EpochCallback& on_epoch) {
  require_train_config(config);
  if (train_set.empty() || val_set.empty()) throw std::invalid_argument("training needs train and validation sets");

  const auto train = make_episodes(train_set);
  const auto val = make_episodes(val_set);
  auto shuffle_rng = make_rng(config.seed, SeedTag::kShuffle);
  auto dual_rng = make_rng(config.seed, SeedTag::kDualSample);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TrainResult result;
  result.params = initial_params(config);
  result.lambda_max = config.lambda_max_init;
  Eigen::VectorXd flat = result.params.flatten();
  Adam adam(flat.size(), config.adam());

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  const long long total_steps = static_cast<long long>(config.num_epochs) *
                                static_cast<long long>((train.size() + batch - 1) / batch);
  const auto start = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < config.num_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t last = std::min(order.size(), first + static_cast<std::size_t>(config.batch_size));
      std::vector<Episode> batch;
      std::vector<DualMultipliers> lambdas;
      for (std::size_t k = first; k < last; ++k) {
        batch.push_back(train[order[k]]);
        lambdas.push_back({unit(dual_rng) * result.lambda_max.lambda_h, unit(dual_rng) * result.lambda_max.lambda_l});
      }
      const auto g = batch_gradient(batch, lambdas, result.params, config.fd_epsilon, config.threads);
      check_finite(g);
      adam.set_learning_rate(scheduled_learning_rate(config, adam.iterations(), total_steps));
      adam.step(flat, g.gradient.flatten());
      result.params = PolicyParams::unflatten(flat);
    }

    const auto summary = validate_online(result.params, val, config.dual_step, config.threads);
    result.lambda_max = lambda_max_from(summary.dual_quantile(config.lambda_max_quantile), config);
    EpochLog entry{epoch, summary.mean.objective, summary.mean.constraints.f_h, summary.mean.constraints.f_l,
                   result.lambda_max, seconds_since(start)};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

TrainResult train_vanilla_pd(std::span<const NetworkRealization> train_set, const TrainConfig& config,
                             std::span<const NetworkRealization> val_set, const EpochCallback& on_epoch) {
  require_train_config(config);
  if (train_set.empty()) throw std::invalid_argument("training needs a nonempty train set");

  const auto train = make_episodes(train_set);
  const auto val = make_episodes(val_set.empty() ? train_set : val_set);
  auto shuffle_rng = make_rng(config.seed, SeedTag::kShuffle);

  TrainResult result;
  result.params = initial_params(config);
  Eigen::VectorXd flat = result.params.flatten();
  Adam adam(flat.size(), config.adam());
  DualMultipliers lambda{};
  result.dual_trajectory.push_back(lambda);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  const long long total_steps = static_cast<long long>(config.num_epochs) *
                                static_cast<long long>((train.size() + batch - 1) / batch);
  const auto start = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < config.num_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t last = std::min(order.size(), first + static_cast<std::size_t>(config.batch_size));
      std::vector<Episode> batch;
      for (std::size_t k = first; k < last; ++k) batch.push_back(train[order[k]]);
      const std::vector<DualMultipliers> lambdas(batch.size(), lambda);
      const auto g = batch_gradient(batch, lambdas, result.params, config.fd_epsilon, config.threads);
      check_finite(g);
      adam.set_learning_rate(scheduled_learning_rate(config, adam.iterations(), total_steps));
      adam.step(flat, g.gradient.flatten());
      result.params = PolicyParams::unflatten(flat);

      const ConstraintValue slack = g.mean.constraints;
      lambda = dual_update(lambda, std::span(&slack, 1), config.dual_step_pd);
      result.dual_trajectory.push_back(lambda);
    }

    std::vector<Trajectory> runs(val.size());
    parallel_for(val.size(), config.threads,
                 [&](std::size_t i) { runs[i] = run_fixed_multipliers(result.params, val[i], lambda); });
    WindowEvaluation mean;
    for (const auto& traj : runs) {
      const auto e = mean_evaluation(traj);
      mean.objective += e.objective / static_cast<double>(runs.size());
      mean.constraints.f_h += e.constraints.f_h / static_cast<double>(runs.size());
      mean.constraints.f_l += e.constraints.f_l / static_cast<double>(runs.size());
    }
    EpochLog entry{epoch, mean.objective, mean.constraints.f_h, mean.constraints.f_l, lambda, seconds_since(start)};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  result.final_lambda = lambda;
  return result;
}

}  // namespace wslice
