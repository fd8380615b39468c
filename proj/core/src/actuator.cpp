#include "impmatch/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "chirp_trace.hpp"
#include "impmatch/errors.hpp"

namespace impmatch {
namespace {

// Velocity scale of the tanh-regularized Coulomb friction, rad/s.
constexpr double kDryFrictionEpsilon = 1e-3;

bool finite(double v) { return std::isfinite(v); }

std::string describe(double t, const std::string& what) {
  std::ostringstream os;
  os << what << " at t = " << t << " s";
  return os.str();
}

}  // namespace

double reflected_inertia(const ActuatorParams& params) {
  return params.rotor_inertia * params.gear_ratio * params.gear_ratio;
}

double ActuatorParams::total_inertia() const {
  return link_inertia + reflected_inertia(*this);
}

void ActuatorParams::validate() const {
  if (!(finite(link_inertia) && link_inertia > 0.0)) {
    throw ValidationError("actuator: link_inertia must be positive");
  }
  if (!(finite(viscous_friction) && viscous_friction >= 0.0)) {
    throw ValidationError("actuator: viscous_friction must be non-negative");
  }
  if (!(finite(rotor_inertia) && rotor_inertia >= 0.0)) {
    throw ValidationError("actuator: rotor_inertia must be non-negative");
  }
  if (!(finite(gear_ratio) && gear_ratio >= 1.0)) {
    throw ValidationError("actuator: gear_ratio must be >= 1");
  }
  if (torque_limit && !(finite(*torque_limit) && *torque_limit > 0.0)) {
    throw ValidationError("actuator: torque_limit must be positive when set");
  }
  if (!(finite(dry_friction) && dry_friction >= 0.0)) {
    throw ValidationError("actuator: dry_friction must be non-negative");
  }
  if (voltage_model) {
    const auto& vm = *voltage_model;
    if (!(finite(vm.torque_constant) && vm.torque_constant > 0.0 &&
          finite(vm.winding_resistance) && vm.winding_resistance > 0.0 &&
          finite(vm.bus_voltage) && vm.bus_voltage > 0.0)) {
      throw ValidationError("actuator: voltage_model fields must be positive");
    }
  }
  if (!(total_inertia() > 0.0)) {
    throw ValidationError("actuator: total inertia must be positive");
  }
}

void PDGains::validate() const {
  if (!(finite(kp) && kp > 0.0)) throw ValidationError("gains: kp must be positive");
  if (!(finite(kd) && kd >= 0.0)) throw ValidationError("gains: kd must be non-negative");
}

std::int64_t SimConfig::decimation() const {
  return std::llround(inner_loop_rate / log_rate);
}

void SimConfig::validate() const {
  if (!(finite(inner_loop_rate) && inner_loop_rate > 0.0 && finite(log_rate) &&
        log_rate > 0.0)) {
    throw ValidationError("sim: inner_loop_rate and log_rate must be positive");
  }
  const double ratio = inner_loop_rate / log_rate;
  if (ratio < 1.0 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("sim: inner_loop_rate must be an integer multiple of log_rate");
  }
  if (!(finite(initial_state.position) && finite(initial_state.velocity))) {
    throw ValidationError("sim: initial_state must be finite");
  }
  if (!(finite(measurement_noise_std) && measurement_noise_std >= 0.0)) {
    throw ValidationError("sim: measurement_noise_std must be non-negative");
  }
}

void TimeSeries::validate() const {
  if (!(finite(sample_rate) && sample_rate > 0.0)) {
    throw ValidationError("time series: sample_rate must be positive");
  }
  if (command.size() != measured.size()) {
    throw ValidationError("time series: channel lengths differ");
  }
  if (command.size() < 2) {
    throw ValidationError("time series: need at least two samples");
  }
}

double limit_torque(const ActuatorParams& params, double commanded_torque,
                    double velocity) {
  double torque = commanded_torque;
  if (params.voltage_model) {
    const auto& vm = *params.voltage_model;
    const double back_emf = vm.torque_constant * params.gear_ratio * velocity;
    const double upper = vm.torque_constant * (vm.bus_voltage - back_emf) / vm.winding_resistance;
    const double lower = -vm.torque_constant * (vm.bus_voltage + back_emf) / vm.winding_resistance;
    torque = std::min(std::max(torque, lower), upper);
  }
  if (params.torque_limit) {
    torque = std::clamp(torque, -*params.torque_limit, *params.torque_limit);
  }
  return torque;
}

StepResult step(const JointState& state, double position_target, double velocity_target,
                const ActuatorParams& params, const PDGains& gains, double dt) {
  if (!(finite(state.position) && finite(state.velocity))) {
    throw NumericError("step: non-finite joint state");
  }
  if (!(finite(position_target) && finite(velocity_target))) {
    throw NumericError("step: non-finite target");
  }
  if (!(finite(dt) && dt > 0.0)) throw ValidationError("step: dt must be positive");

  const double commanded = gains.kp * (position_target - state.position) +
                           gains.kd * (velocity_target - state.velocity);
  const double applied = limit_torque(params, commanded, state.velocity);

  double net = applied - params.viscous_friction * state.velocity;
  if (params.dry_friction > 0.0) {
    net -= params.dry_friction * std::tanh(state.velocity / kDryFrictionEpsilon);
  }
  const double accel = net / params.total_inertia();

  StepResult out;
  out.state.velocity = state.velocity + dt * accel;
  out.state.position = state.position + dt * out.state.velocity;
  out.applied_torque = applied;
  return out;
}

namespace detail {

ChirpTrace::ChirpTrace(const ChirpSpec& chirp, double rate, std::int64_t steps) {
  position.resize(static_cast<std::size_t>(steps));
  velocity.resize(static_cast<std::size_t>(steps));
  for (std::int64_t n = 0; n < steps; ++n) {
    const double t = std::min(static_cast<double>(n) / rate, chirp.duration);
    const auto s = chirp_signal(chirp, t);
    position[static_cast<std::size_t>(n)] = s.position;
    velocity[static_cast<std::size_t>(n)] = s.velocity;
  }
}

std::int64_t log_sample_count(const ChirpSpec& chirp, const SimConfig& sim) {
  // Samples at t = k / log_rate for k = 0..floor(duration * log_rate).
  return static_cast<std::int64_t>(std::floor(chirp.duration * sim.log_rate + 1e-9)) + 1;
}

void check_sweep_inputs(const ActuatorParams& params, const PDGains& gains,
                        const ChirpSpec& chirp, const SimConfig& sim) {
  params.validate();
  gains.validate();
  chirp.validate();
  sim.validate();
  if (sim.inner_loop_rate < 20.0 * chirp.f_end) {
    throw ValidationError("sim: inner_loop_rate must be at least 20x the chirp end frequency");
  }
}

TimeSeries run_sweep(const ActuatorParams& params, const PDGains& gains,
                     const ChirpSpec& chirp, const SimConfig& sim, const ChirpTrace& trace,
                     std::uint64_t seed) {
  const std::int64_t samples = log_sample_count(chirp, sim);
  const std::int64_t decimation = sim.decimation();
  const double dt = 1.0 / sim.inner_loop_rate;
  const double limit =
      kDivergenceFactor * std::max(chirp.amplitude, std::abs(sim.initial_state.position));
  const double velocity_gain = sim.velocity_feedforward ? 1.0 : 0.0;

  TimeSeries ts;
  ts.sample_rate = sim.log_rate;
  ts.command.resize(static_cast<std::size_t>(samples));
  ts.measured.resize(static_cast<std::size_t>(samples));

  JointState state = sim.initial_state;
  ts.command[0] = trace.position[0];
  ts.measured[0] = state.position;

  for (std::int64_t k = 1; k < samples; ++k) {
    for (std::int64_t j = 0; j < decimation; ++j) {
      const auto n = static_cast<std::size_t>((k - 1) * decimation + j);
      StepResult r;
      try {
        r = step(state, trace.position[n], velocity_gain * trace.velocity[n], params, gains, dt);
      } catch (const NumericError& e) {
        const double t = static_cast<double>(n) * dt;
        throw NumericError(std::string(e.what()) + describe(t, " (inner sample") + ")");
      }
      state = r.state;
      if (!finite(state.position) || std::abs(state.position) > limit) {
        const double t = static_cast<double>(n + 1) * dt;
        throw DivergenceError(describe(t, "simulation diverged: |theta| exceeded " +
                                              std::to_string(limit) + " rad"),
                              t);
      }
    }
    const auto idx = static_cast<std::size_t>(k);
    ts.command[idx] = trace.position[static_cast<std::size_t>(k * decimation)];
    ts.measured[idx] = state.position;
  }

  if (sim.measurement_noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sim.measurement_noise_std);
    for (auto& y : ts.measured) y += noise(rng);
  }
  return ts;
}

}  // namespace detail

TimeSeries simulate_sweep(const ActuatorParams& params, const PDGains& gains,
                          const ChirpSpec& chirp, const SimConfig& sim, std::uint64_t seed) {
  detail::check_sweep_inputs(params, gains, chirp, sim);
  const std::int64_t samples = detail::log_sample_count(chirp, sim);
  const detail::ChirpTrace trace(chirp, sim.inner_loop_rate,
                                 (samples - 1) * sim.decimation() + 1);
  return detail::run_sweep(params, gains, chirp, sim, trace, seed);
}

}  // namespace impmatch
