#include "impmatch/presets.hpp"

namespace impmatch::presets {

ActuatorParams knee() {
  ActuatorParams p;
  p.link_inertia = kKneeLinkInertia;
  p.viscous_friction = 0.0;
  p.rotor_inertia = kRotorInertia;
  p.gear_ratio = kKneeGearRatio;
  return p;
}

ActuatorParams hip() {
  ActuatorParams p;
  p.link_inertia = kHipLinkInertia;
  p.viscous_friction = 0.0;
  p.rotor_inertia = kRotorInertia;
  p.gear_ratio = kHipGearRatio;
  return p;
}

std::string_view joint_name(Joint joint) {
  switch (joint) {
    case Joint::kHipRoll: return "hip_roll";
    case Joint::kHipPitch: return "hip_pitch";
    case Joint::kKnee: return "knee";
  }
  return "unknown";
}

MatchedGainTable matched_gains(Joint joint) {
  switch (joint) {
    case Joint::kHipRoll:
      return {{20.6, 18.1, 18.5, 21.0}, {0.492, 0.516, 0.431, 0.49}};
    case Joint::kHipPitch:
      return {{16.5, 17.7, 16.9, 18.9}, {0.382, 0.406, 0.382, 0.431}};
    case Joint::kKnee:
      return {{21.8, 22.0, 22.2, 21.8}, {0.541, 0.523, 0.553, 0.553}};
  }
  return {};
}

PDGains training_gains(Joint joint) {
  switch (joint) {
    case Joint::kHipRoll: return {20.0, 0.45};
    case Joint::kHipPitch: return {17.5, 0.4};
    case Joint::kKnee: return {21.5, 0.55};
  }
  return {};
}

}  // namespace impmatch::presets
