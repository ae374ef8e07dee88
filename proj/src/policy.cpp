#include "wslice/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace wslice {

PolicyParams PolicyParams::zeros() {
  PolicyParams p;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    p.layers[l].weight = Eigen::MatrixXd::Zero(kLayerWidths[l + 1], kLayerWidths[l]);
    p.layers[l].bias = Eigen::VectorXd::Zero(kLayerWidths[l + 1]);
  }
  return p;
}

std::size_t PolicyParams::num_parameters() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers) n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

bool PolicyParams::has_expected_shapes() const noexcept {
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    const auto& layer = layers[l];
    if (layer.weight.rows() != kLayerWidths[l + 1] || layer.weight.cols() != kLayerWidths[l]) return false;
    if (layer.bias.size() != kLayerWidths[l + 1]) return false;
  }
  return true;
}

bool PolicyParams::all_finite() const noexcept {
  for (const auto& layer : layers)
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  return true;
}

Eigen::VectorXd PolicyParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index k = 0;
  for (const auto& layer : layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) flat[k++] = layer.weight(r, c);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) flat[k++] = layer.bias[r];
  }
  return flat;
}

PolicyParams PolicyParams::unflatten(const Eigen::VectorXd& flat) {
  PolicyParams p = zeros();
  if (static_cast<std::size_t>(flat.size()) != p.num_parameters())
    throw std::invalid_argument("flat parameter vector has the wrong length");
  Eigen::Index k = 0;
  for (auto& layer : p.layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = flat[k++];
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = flat[k++];
  }
  return p;
}

PolicyParams& PolicyParams::operator+=(const PolicyParams& other) {
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    layers[l].weight += other.layers[l].weight;
    layers[l].bias += other.layers[l].bias;
  }
  return *this;
}

PolicyParams& PolicyParams::operator*=(double scale) {
  for (auto& layer : layers) {
    layer.weight *= scale;
    layer.bias *= scale;
  }
  return *this;
}

PolicyInput make_policy_input(const NetworkStateVector& state, const DualMultipliers& lambda) {
  PolicyInput x;
  for (std::size_t k = 0; k < NetworkStateVector::kSize; ++k) x[static_cast<Eigen::Index>(k)] = state.values[k];
  x[9] = std::log1p(lambda.lambda_h);
  x[10] = std::log1p(lambda.lambda_l);
  return x;
}

SliceAllocation softmax_allocation(const Logits& logits) {
  const double m = logits.maxCoeff();
  const Eigen::Vector3d e = (logits.array() - m).exp();
  const double z = e.sum();
  return {e[0] / z, e[1] / z, e[2] / z};
}

ForwardResult forward(const PolicyParams& params, const PolicyInput& input) {
  if (!input.allFinite()) throw std::invalid_argument("policy input is not finite");
  if (!params.has_expected_shapes()) throw std::invalid_argument("policy parameters have unexpected shapes");

  ForwardResult out;
  Eigen::VectorXd a = input;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    const auto& layer = params.layers[l];
    out.cache.layer_input[l] = a;
    Eigen::VectorXd z = layer.weight * a + layer.bias;
    out.cache.pre_activation[l] = z;
    a = (l + 1 < kNumLayers) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  out.logits = a;
  out.allocation = softmax_allocation(out.logits);
  return out;
}

PolicyParams backward(const PolicyParams& params, const ForwardCache& cache, const Logits& d_logits) {
  if (!params.has_expected_shapes()) throw std::invalid_argument("policy parameters have unexpected shapes");
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    if (cache.layer_input[l].size() != kLayerWidths[l] || cache.pre_activation[l].size() != kLayerWidths[l + 1])
      throw std::invalid_argument("forward cache does not match the policy shapes");
  }
  PolicyParams grad = PolicyParams::zeros();
  Eigen::VectorXd delta = d_logits;  // dL/dz for the current layer
  for (std::size_t l = kNumLayers; l-- > 0;) {
    grad.layers[l].weight.noalias() = delta * cache.layer_input[l].transpose();
    grad.layers[l].bias = delta;
    if (l == 0) break;
    Eigen::VectorXd upstream = params.layers[l].weight.transpose() * delta;
    const auto& z_prev = cache.pre_activation[l - 1];
    delta = (z_prev.array() > 0.0).select(upstream, 0.0);
  }
  return grad;
}

namespace {
constexpr double kOutputInitScale = 0.1;
}  // namespace

PolicyParams init_params(Rng& rng) {
  PolicyParams p = PolicyParams::zeros();
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    // Small output layer: the initial allocation starts near uniform.
    const double scale = l + 1 == kNumLayers ? kOutputInitScale : 1.0;
    const double limit = scale * std::sqrt(6.0 / kLayerWidths[l]);
    std::uniform_real_distribution<double> dist(-limit, limit);
    auto& w = p.layers[l].weight;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
  }
  return p;
}

}  // namespace wslice
