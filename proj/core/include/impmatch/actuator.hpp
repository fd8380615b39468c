#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "impmatch/excitation.hpp"

namespace impmatch {

/// Linear back-emf motor envelope. Torque available on the output shaft is
/// k_t * (V - k_t * N * qdot) / R in the direction of motion and
/// k_t * (V + k_t * N * qdot) / R against it.
struct VoltageModel {
  double torque_constant = 0.0;    // N*m/A
  double winding_resistance = 0.0; // ohm
  double bus_voltage = 0.0;        // V
};

/// Single geared joint. The rotor inertia is given on the motor side and is
/// reflected through the gearbox as rotor_inertia * gear_ratio^2.
struct ActuatorParams {
  double link_inertia = 0.001;       // kg*m^2
  double viscous_friction = 0.0;     // N*m*s/rad
  double rotor_inertia = 0.000072;   // kg*m^2, motor side
  double gear_ratio = 9.33;
  std::optional<double> torque_limit; // N*m, unset = unlimited
  double dry_friction = 0.0;         // N*m, Coulomb magnitude
  std::optional<VoltageModel> voltage_model;

  double total_inertia() const;
  void validate() const;
};

/// Reflected rotor inertia (armature) seen at the joint, in kg*m^2.
double reflected_inertia(const ActuatorParams& params);

struct PDGains {
  double kp = 17.0; // N*m/rad
  double kd = 0.4;  // N*m*s/rad

  void validate() const;
  friend bool operator==(const PDGains&, const PDGains&) = default;
};

struct JointState {
  double position = 0.0; // rad
  double velocity = 0.0; // rad/s

  friend bool operator==(const JointState&, const JointState&) = default;
};

struct SimConfig {
  double inner_loop_rate = 40000.0; // Hz, PD update rate
  double log_rate = 1000.0;         // Hz
  JointState initial_state;
  double measurement_noise_std = 0.0; // rad
  // When false the derivative term only damps the measured velocity.
  bool velocity_feedforward = true;

  /// Number of inner steps per logged sample.
  std::int64_t decimation() const;
  void validate() const;
};

struct TimeSeries {
  double sample_rate = 0.0;     // Hz
  std::vector<double> command;  // theta_des, rad
  std::vector<double> measured; // theta, rad

  std::size_t size() const { return command.size(); }
  void validate() const;
};

struct StepResult {
  JointState state;
  double applied_torque; // N*m after limits, before dry friction
};

/// Output torque after the torque limit and the voltage envelope (if any).
double limit_torque(const ActuatorParams& params, double commanded_torque,
                    double velocity);

/// One semi-implicit Euler step of the PD-controlled joint.
StepResult step(const JointState& state, double position_target,
                double velocity_target, const ActuatorParams& params,
                const PDGains& gains, double dt);

/// Divergence threshold used by simulate_sweep: |theta| above this aborts.
inline constexpr double kDivergenceFactor = 100.0;

/// Drives the joint with the chirp for its whole duration and logs command
/// and measured position at sim.log_rate. Noise is drawn from a generator
/// seeded with `seed` and added to the measured channel only. Throws
/// DivergenceError if |theta| exceeds kDivergenceFactor times the larger of
/// the chirp amplitude and the initial offset.
TimeSeries simulate_sweep(const ActuatorParams& params, const PDGains& gains,
                          const ChirpSpec& chirp, const SimConfig& sim,
                          std::uint64_t seed = 0);

}  // namespace impmatch
