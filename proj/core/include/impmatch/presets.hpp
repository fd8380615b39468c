#pragma once

#include <array>
#include <string_view>

#include "impmatch/actuator.hpp"

// Reference values for the Mini Cheetah class actuator used throughout the
// tests and the default configuration.
namespace impmatch::presets {

inline constexpr double kRotorInertia = 0.000072; // kg*m^2, motor side
inline constexpr double kKneeGearRatio = 9.33;
inline constexpr double kHipGearRatio = 6.0;
inline constexpr double kMaxOutputTorque = 17.0; // N*m

inline constexpr double kChirpStartHz = 0.1;
inline constexpr double kChirpEndHz = 25.0;
inline constexpr double kChirpAmplitude = 0.25; // rad
inline constexpr double kInnerLoopRate = 40000.0; // Hz
inline constexpr double kPolicyRate = 50.0;       // Hz

/// Gains the hardware PD loop actually runs.
inline constexpr PDGains kHardwareGains{17.0, 0.4};

/// Link-side inertia about the knee axis (shank), kg*m^2.
inline constexpr double kKneeLinkInertia = 0.001;
/// Link-side inertia about the hip axes, kg*m^2.
inline constexpr double kHipLinkInertia = 0.004;

ActuatorParams knee();
ActuatorParams hip();

enum class Joint { kHipRoll, kHipPitch, kKnee };

std::string_view joint_name(Joint joint);

/// Simulation gains matched per leg (FR, FL, HR, HL).
struct MatchedGainTable {
  std::array<double, 4> kp;
  std::array<double, 4> kd;
};

MatchedGainTable matched_gains(Joint joint);

/// Nominal gains the training environment uses for each joint.
PDGains training_gains(Joint joint);

/// Uniform randomization applied during training. Each entry is a symmetric
/// half-width unless stated otherwise.
struct TrainingRandomization {
  double kp_half_range = 2.0;            // N*m/rad
  double kd_half_range = 0.05;           // N*m*s/rad
  double ground_friction_min = 0.05;
  double ground_friction_max = 3.0;
  double shank_length_min = 0.18;        // m
  double shank_length_max = 0.20;        // m
  double base_mass_offset_min = -0.4;    // kg
  double base_mass_offset_max = 1.6;     // kg
  double joint_position_noise = 0.05;    // rad
  double joint_velocity_noise = 0.5;     // rad/s
  double angular_velocity_noise = 0.2;   // rad/s
  double projected_gravity_noise = 0.05;
  double decimation_offset = 2.0;
};

}  // namespace impmatch::presets
