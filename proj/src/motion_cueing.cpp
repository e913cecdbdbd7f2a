#include "cuesim/motion_cueing.hpp"

#include <cmath>

namespace cuesim {

const char* to_string(RollSource s) {
  switch (s) {
    case RollSource::Centripetal: return "centripetal";
    case RollSource::Differenced: return "differenced";
    case RollSource::Sum: return "sum";
  }
  return "?";
}

void CueGains::validate() const {
  require(pitch_gain_deg_per_mps2 >= 0.0, "cueing.pitch_gain: must be >= 0");
  require(roll_gain_deg_per_mps2 >= 0.0, "cueing.roll_gain: must be >= 0");
  require(yaw_gain >= 0.0, "cueing.yaw_gain: must be >= 0");
}

void CueingParams::validate() const {
  gains.validate();
  require(hp_time_constant_s > 0.0, "cueing.hp_time_constant_s: must be > 0");
  require(subthreshold_deg_per_s > 0.0, "cueing.subthreshold_deg_s: must be > 0");
}

HighPassResult high_pass_step(HighPassState state, double x, double time_constant_s,
                              double dt_s) {
  require(time_constant_s > 0.0, "high_pass_step: time constant must be > 0");
  require(dt_s > 0.0, "high_pass_step: dt must be > 0");
  const double beta = time_constant_s / (time_constant_s + dt_s);
  const double y = beta * (state.last_output + x - state.last_input);
  return {y, HighPassState{x, y}};
}

YawWashoutResult yaw_washout_step(YawWashoutState state, double yaw_rate_rps,
                                  const CueingParams& params, double dt_s) {
  params.validate();
  const auto hp = high_pass_step(state.hp, yaw_rate_rps, params.hp_time_constant_s, dt_s);

  double yaw = state.yaw_cmd_deg + params.gains.yaw_gain * rad_to_deg(hp.output) * dt_s;
  // Subthreshold return toward the origin, never crossing it.
  const double back = std::min(std::abs(yaw), params.subthreshold_deg_per_s * dt_s);
  yaw -= std::copysign(back, yaw);

  return {yaw, YawWashoutState{hp.state, yaw}};
}

TiltCue tilt_cues(const BodyAccel& accel, double centripetal_mps2, const CueGains& gains,
                  RollSource source) {
  gains.validate();
  double roll_accel = centripetal_mps2;
  if (source == RollSource::Differenced) {
    roll_accel = accel.lateral_mps2;
  } else if (source == RollSource::Sum) {
    roll_accel = centripetal_mps2 + accel.lateral_mps2;
  }
  TiltCue cue;
  cue.pitch_deg = -gains.pitch_gain_deg_per_mps2 * accel.longitudinal_mps2;
  cue.roll_deg = gains.roll_gain_deg_per_mps2 * roll_accel;
  return cue;
}

CueTarget compose_cue_frame(const BodyAccel& accel, double speed_mps, double yaw_rate_rps,
                            CueingState& state, const CueingParams& params, double dt_s) {
  const double centripetal = centripetal_accel(speed_mps, yaw_rate_rps);
  const TiltCue tilt = tilt_cues(accel, centripetal, params.gains, params.roll_source);
  const auto washout = yaw_washout_step(state.yaw, yaw_rate_rps, params, dt_s);
  state.yaw = washout.state;
  return {tilt.pitch_deg, tilt.roll_deg, washout.yaw_cmd_deg};
}

}  // namespace cuesim
