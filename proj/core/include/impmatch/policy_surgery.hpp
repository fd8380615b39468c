#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace impmatch {

/// First dense layer of an MLP: pre = W * x + b with W stored row-major as
/// hidden x inputs.
class MlpFirstLayer {
 public:
  MlpFirstLayer() = default;
  MlpFirstLayer(std::size_t hidden, std::size_t inputs, std::vector<double> weights,
                std::vector<double> bias);

  std::size_t hidden() const { return hidden_; }
  std::size_t inputs() const { return inputs_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  double weight(std::size_t row, std::size_t col) const {
    return weights_[row * inputs_ + col];
  }

  std::vector<double> pre_activations(std::span<const double> input) const;

  friend bool operator==(const MlpFirstLayer&, const MlpFirstLayer&) = default;

 private:
  std::size_t hidden_ = 0;
  std::size_t inputs_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

/// Appends one input whose outgoing weights are all zero, so the widened
/// layer computes the same pre-activations for any value of the new input.
MlpFirstLayer widen_input_layer(const MlpFirstLayer& layer);

enum class TrainingPhase { kWalk, kJumpShaping, kJumpRefinement };

struct JumpRewardParams {
  double v_liftoff_desired = 2.5; // m/s
  // Per-phase multipliers, indexed by TrainingPhase.
  std::array<double, 3> dense_scale{0.0, -2.5, -0.25};
  std::array<double, 3> sparse_scale{0.0, 250.0, 250.0};

  void validate() const;
};

/// -std(F) over the four foot contact forces (population form).
double dense_jump_reward(const std::array<double, 4>& foot_forces);

/// exp(-(v - v_des)^2 / 2).
double sparse_jump_reward(double v_liftoff, const JumpRewardParams& params = {});

double scaled_dense_jump_reward(const std::array<double, 4>& foot_forces,
                                TrainingPhase phase,
                                const JumpRewardParams& params = {});
double scaled_sparse_jump_reward(double v_liftoff, TrainingPhase phase,
                                 const JumpRewardParams& params = {});

}  // namespace impmatch
