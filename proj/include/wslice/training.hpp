#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wslice/adam.hpp"
#include "wslice/domain.hpp"
#include "wslice/episode.hpp"
#include "wslice/policy.hpp"
#include "wslice/qos.hpp"
#include "wslice/rng.hpp"

namespace wslice {

struct TrainConfig {
  int num_epochs = 100;
  int batch_size = 8;
  double learning_rate = 1e-4;
  /// Cosine decay of the learning rate down to learning_rate * lr_final_fraction
  /// over the run; 1 keeps it constant.
  double lr_final_fraction = 1.0;
  double dual_step_pd = 0.1;  ///< dual step of vanilla primal-dual training
  double dual_step = 1.0;     ///< dual step of online execution (and lambda_max calibration)
  DualMultipliers lambda_max_init{1.0, 1.0};
  double lambda_max_margin = 1.1;
  double lambda_max_floor = 1.0;
  /// Quantile of the per-realization dual maxima used for calibration; 1 takes the max.
  double lambda_max_quantile = 1.0;
  double fd_epsilon = 1e-2;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  int num_train = 128;
  int num_val = 16;
  int num_test = 128;
  int threads = 1;

  [[nodiscard]] AdamOptions adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_epsilon}; }
};

std::vector<std::string> validate_train_config(const TrainConfig& config);

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform draw over (n_H, n_L, n_B) with every part >= 1 and sum == total.
std::array<int, kNumSlices> sample_composition(int total, Rng& rng);

/// Fresh realizations: composition, initial rates, mean SNRs and seeds are all
/// derived from one seed drawn from `rng` per realization.
std::vector<NetworkRealization> sample_realizations(int count, const NetworkConfig& config, Rng& rng);

/// Train / validation / test sets derived from a root seed. A zero count leaves that set empty.
struct RealizationSets {
  std::vector<NetworkRealization> train;
  std::vector<NetworkRealization> validation;
  std::vector<NetworkRealization> test;
};
RealizationSets make_realization_sets(std::uint64_t root_seed, const NetworkConfig& config, int num_train,
                                      int num_val, int num_test);
std::vector<NetworkRealization> make_test_set(std::uint64_t root_seed, const NetworkConfig& config, int num_test);

/// Snapshot of one window: the world before the window plus its traces.
struct WindowContext {
  const NetworkRealization& realization;
  int window;
  const WorldState& world;
  const ArrivalTrace& arrivals;
  const ChannelTrace& channel;
};

/// Lagrangian integrand of the window under `allocation`, simulated on a copy of the world.
double window_lagrangian(const WindowContext& ctx, const SliceAllocation& allocation, const DualMultipliers& lambda);

/// Central differences of the window Lagrangian w.r.t. the three logits, each
/// perturbed by +-epsilon under identical traces and queue snapshots.
Logits estimate_logit_gradient(const WindowContext& ctx, const Logits& logits, const DualMultipliers& lambda,
                               double epsilon);

/// Parameter gradient of the episode Lagrangian at fixed multipliers, plus what it measured.
struct EpisodeGradient {
  PolicyParams gradient;
  double lagrangian = 0.0;
  WindowEvaluation mean;
};

EpisodeGradient episode_gradient(const Episode& episode, const PolicyParams& params, const DualMultipliers& lambda,
                                 double epsilon);

/// Mean of per-element gradients and Lagrangians (the empirical Lagrangian of a batch).
EpisodeGradient batch_gradient(std::span<const Episode> episodes, std::span<const DualMultipliers> lambdas,
                               const PolicyParams& params, double epsilon, int threads = 1);

struct EpochLog {
  int epoch = 0;
  double val_objective = 0.0;
  double val_f_h = 0.0;
  double val_f_l = 0.0;
  DualMultipliers lambda_max;
  double wall_time = 0.0;
};

struct TrainResult {
  PolicyParams params;
  std::vector<EpochLog> log;
  DualMultipliers lambda_max;                  ///< SA-PD: final sampling bound
  DualMultipliers final_lambda;                ///< PD: last dual iterate
  std::vector<DualMultipliers> dual_trajectory; ///< PD: lambda_k per iteration
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Validation pass used by calibration: online dual runs on every realization.
struct ValidationSummary {
  DualMultipliers max_dual;
  std::vector<DualMultipliers> run_max;  ///< per-realization dual maxima
  /// Per-component quantile of run_max (linear interpolation, q = 1 gives max_dual).
  [[nodiscard]] DualMultipliers dual_quantile(double q) const;
  WindowEvaluation mean;
};
ValidationSummary validate_online(const PolicyParams& params, std::span<const Episode> episodes, double eta_lambda,
                                  int threads = 1);

/// Each component: max(floor, margin * q-quantile of the per-run largest dual iterates).
DualMultipliers calibrate_lambda_max(const PolicyParams& params, std::span<const NetworkRealization> val_set,
                                     const TrainConfig& config);
DualMultipliers lambda_max_from(const DualMultipliers& observed_max, const TrainConfig& config) noexcept;

/// Offline state-augmented training: per-episode multipliers drawn from
/// U[0, lambda_max]^2, one Adam step per batch, lambda_max recalibrated each epoch.
TrainResult train_state_augmented(std::span<const NetworkRealization> train_set,
                                  std::span<const NetworkRealization> val_set, const TrainConfig& config,
                                  const EpochCallback& on_epoch = {});

/// Vanilla primal-dual training with one shared multiplier updated by projected
/// dual ascent after every batch. `val_set` only feeds the epoch log.
TrainResult train_vanilla_pd(std::span<const NetworkRealization> train_set, const TrainConfig& config,
                             std::span<const NetworkRealization> val_set = {}, const EpochCallback& on_epoch = {});

/// Learning rate at optimizer step `step` of `total_steps`.
double scheduled_learning_rate(const TrainConfig& config, long long step, long long total_steps) noexcept;

/// Initial parameters for a training seed.
PolicyParams initial_params(const TrainConfig& config);

}  // namespace wslice
