#include "impmatch/policy_surgery.hpp"

#include <cmath>
#include <numeric>

#include "impmatch/errors.hpp"

namespace impmatch {

MlpFirstLayer::MlpFirstLayer(std::size_t hidden, std::size_t inputs,
                             std::vector<double> weights, std::vector<double> bias)
    : hidden_(hidden), inputs_(inputs), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (hidden_ == 0) throw ValidationError("layer: hidden size must be positive");
  if (weights_.size() != hidden_ * inputs_) {
    throw ValidationError("layer: weight count does not match hidden x inputs");
  }
  if (bias_.size() != hidden_) throw ValidationError("layer: bias length must equal hidden size");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw ValidationError("layer: non-finite weight");
  }
  for (double b : bias_) {
    if (!std::isfinite(b)) throw ValidationError("layer: non-finite bias");
  }
}

std::vector<double> MlpFirstLayer::pre_activations(std::span<const double> input) const {
  if (input.size() != inputs_) throw ValidationError("layer: input length mismatch");
  std::vector<double> out(bias_);
  for (std::size_t r = 0; r < hidden_; ++r) {
    double acc = bias_[r];
    for (std::size_t c = 0; c < inputs_; ++c) acc += weights_[r * inputs_ + c] * input[c];
    out[r] = acc;
  }
  return out;
}

MlpFirstLayer widen_input_layer(const MlpFirstLayer& layer) {
  const std::size_t n = layer.inputs();
  std::vector<double> weights;
  weights.reserve(layer.hidden() * (n + 1));
  for (std::size_t r = 0; r < layer.hidden(); ++r) {
    for (std::size_t c = 0; c < n; ++c) weights.push_back(layer.weight(r, c));
    weights.push_back(0.0);
  }
  return MlpFirstLayer(layer.hidden(), n + 1, std::move(weights), layer.bias());
}

void JumpRewardParams::validate() const {
  if (!(std::isfinite(v_liftoff_desired) && v_liftoff_desired > 0.0)) {
    throw ValidationError("jump reward: v_liftoff_desired must be positive");
  }
}

double dense_jump_reward(const std::array<double, 4>& foot_forces) {
  for (double f : foot_forces) {
    if (!(std::isfinite(f) && f >= 0.0)) {
      throw std::domain_error("dense_jump_reward: foot forces must be finite and non-negative");
    }
  }
  const double mean = std::accumulate(foot_forces.begin(), foot_forces.end(), 0.0) / 4.0;
  double var = 0.0;
  for (double f : foot_forces) var += (f - mean) * (f - mean);
  return -std::sqrt(var / 4.0);
}

double sparse_jump_reward(double v_liftoff, const JumpRewardParams& params) {
  params.validate();
  if (!std::isfinite(v_liftoff)) throw std::domain_error("sparse_jump_reward: non-finite velocity");
  const double d = v_liftoff - params.v_liftoff_desired;
  return std::exp(-d * d / 2.0);
}

double scaled_dense_jump_reward(const std::array<double, 4>& foot_forces, TrainingPhase phase,
                                const JumpRewardParams& params) {
  return params.dense_scale[static_cast<std::size_t>(phase)] * dense_jump_reward(foot_forces);
}

double scaled_sparse_jump_reward(double v_liftoff, TrainingPhase phase,
                                 const JumpRewardParams& params) {
  return params.sparse_scale[static_cast<std::size_t>(phase)] *
         sparse_jump_reward(v_liftoff, params);
}

}  // namespace impmatch
