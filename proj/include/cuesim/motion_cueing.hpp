#pragma once

#include "cuesim/types.hpp"
#include "cuesim/vehicle_dynamics.hpp"

namespace cuesim {

/// Which lateral signal drives the roll cue. The roll channel can take the
/// centripetal term (default), the frame-differenced lateral acceleration,
/// or their sum.
enum class RollSource { Centripetal, Differenced, Sum };

const char* to_string(RollSource s);

struct CueGains {
  double pitch_gain_deg_per_mps2 = 1.5;
  double roll_gain_deg_per_mps2 = 1.5;
  // Dimensionless gain on the integrated, high-passed yaw angle.
  double yaw_gain = 1.0;

  void validate() const;
};

struct CueingParams {
  CueGains gains;
  double hp_time_constant_s = 1.0;
  double subthreshold_deg_per_s = 2.0;  // return-to-origin rate for the yaw channel
  RollSource roll_source = RollSource::Centripetal;

  void validate() const;
};

/// Discrete first-order high-pass: y = beta * (last_output + x - last_input)
/// with beta = time_constant / (time_constant + dt). Rejects DC; a constant
/// input decays geometrically with ratio beta.
struct HighPassState {
  double last_input = 0.0;   // rad/s
  double last_output = 0.0;  // rad/s
};

struct HighPassResult {
  double output = 0.0;
  HighPassState state;
};

HighPassResult high_pass_step(HighPassState state, double x, double time_constant_s, double dt_s);

/// Washout memory for the yaw channel: the high-pass filter plus the current
/// platform yaw command.
struct YawWashoutState {
  HighPassState hp;
  double yaw_cmd_deg = 0.0;
};

struct YawWashoutResult {
  double yaw_cmd_deg = 0.0;
  YawWashoutState state;
};

/// One washout step: integrate the high-passed yaw rate into the yaw command
/// (rad/s converted to deg/s), then move the command toward zero by at most
/// subthreshold_deg_per_s * dt, never overshooting zero.
YawWashoutResult yaw_washout_step(YawWashoutState state, double yaw_rate_rps,
                                  const CueingParams& params, double dt_s);

struct TiltCue {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
};

/// Memoryless scaled tilt: pitch = -pitch_gain * longitudinal (forward
/// acceleration tilts the nose back; positive pitch is nose-down), roll =
/// roll_gain * selected lateral source (+roll is left side down, matching a
/// left turn's centripetal acceleration). No temporal filtering.
TiltCue tilt_cues(const BodyAccel& accel, double centripetal_mps2, const CueGains& gains,
                  RollSource source = RollSource::Centripetal);

/// Pre-clamp platform pose request. Limits are owned by the platform model.
struct CueTarget {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
  double yaw_deg = 0.0;
};

struct CueingState {
  YawWashoutState yaw;
};

/// Assemble one cue frame: tilt from the body acceleration and the
/// centripetal term, yaw from the washout. Performs no clamping.
CueTarget compose_cue_frame(const BodyAccel& accel, double speed_mps, double yaw_rate_rps,
                            CueingState& state, const CueingParams& params, double dt_s);

}  // namespace cuesim
