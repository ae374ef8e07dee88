#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "wslice/domain.hpp"
#include "wslice/rng.hpp"

namespace wslice {

/// Layer widths of the state-augmented MLP: 9 state features + 2 multipliers in,
/// three slice logits out.
inline constexpr std::array<int, 5> kLayerWidths{11, 64, 64, 32, 3};
inline constexpr std::size_t kNumLayers = kLayerWidths.size() - 1;
inline constexpr int kPolicyInputSize = kLayerWidths.front();

using PolicyInput = Eigen::Matrix<double, kPolicyInputSize, 1>;
using Logits = Eigen::Vector3d;

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< out x in
  Eigen::VectorXd bias;    ///< out
};

/// Weights and biases of the policy network (also used, with the same shapes,
/// by the vanilla primal-dual baseline).
struct PolicyParams {
  std::array<DenseLayer, kNumLayers> layers;

  static PolicyParams zeros();

  [[nodiscard]] std::size_t num_parameters() const noexcept;
  [[nodiscard]] bool has_expected_shapes() const noexcept;
  [[nodiscard]] bool all_finite() const noexcept;

  /// Row-major weights then bias, layer by layer.
  [[nodiscard]] Eigen::VectorXd flatten() const;
  static PolicyParams unflatten(const Eigen::VectorXd& flat);

  PolicyParams& operator+=(const PolicyParams& other);
  PolicyParams& operator*=(double scale);
};

PolicyInput make_policy_input(const NetworkStateVector& state, const DualMultipliers& lambda);

/// Values kept by forward() for backpropagation.
struct ForwardCache {
  std::array<Eigen::VectorXd, kNumLayers> layer_input;  ///< activation entering each layer
  std::array<Eigen::VectorXd, kNumLayers> pre_activation;
};

struct ForwardResult {
  Logits logits;
  SliceAllocation allocation;
  ForwardCache cache;
};

/// Numerically stable softmax onto the slice simplex.
SliceAllocation softmax_allocation(const Logits& logits);

/// ReLU hidden layers, linear output layer, softmax head. Throws
/// std::invalid_argument on non-finite input or mismatched shapes.
ForwardResult forward(const PolicyParams& params, const PolicyInput& input);

/// Parameter gradient of dot(d_logits, logits), by reverse-mode accumulation.
PolicyParams backward(const PolicyParams& params, const ForwardCache& cache, const Logits& d_logits);

/// He-uniform weights (limit sqrt(6 / fan_in)), zero biases.
PolicyParams init_params(Rng& rng);

}  // namespace wslice
