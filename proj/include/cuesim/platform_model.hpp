#pragma once

#include "cuesim/motion_cueing.hpp"
#include "cuesim/types.hpp"

namespace cuesim {

/// Travel limits of the 3-motor moving base. Pitch is asymmetric and is
/// enforced in pose space; the motors themselves are symmetric.
struct PlatformLimits {
  double pitch_min_deg = -4.4;
  double pitch_max_deg = 6.6;
  double roll_limit_deg = 9.0;
  double yaw_limit_deg = 10.0;
  double motor_limit_deg = 20.0;
  double motor_rate_deg_per_s = 80.0;

  void validate() const;

  // Pose degrees per motor degree. The pitch scale uses the positive side so
  // zero motors map to zero pose.
  double pitch_scale() const { return pitch_max_deg / motor_limit_deg; }
  double roll_scale() const { return roll_limit_deg / motor_limit_deg; }
  double yaw_scale() const { return yaw_limit_deg / motor_limit_deg; }
};

struct PlatformPose {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
  double yaw_deg = 0.0;
};

/// The two frontal motors share an axle (same direction = pitch, opposite =
/// roll); the rear motor yaws the whole seat assembly.
struct MotorAngles {
  double front_left_deg = 0.0;
  double front_right_deg = 0.0;
  double rear_deg = 0.0;
};

/// Servo-utility command shaping: dead zone, clipping, optional first-order
/// smoothing. power_usage is accepted for config fidelity but has no
/// kinematic effect.
struct ServoParams {
  double dead_zone_deg = 0.0;
  double clip_deg = 20.0;
  double smoothing_time_constant_s = 0.0;  // 0 disables smoothing
  double power_usage = 1.0;

  void validate(const PlatformLimits& limits) const;
};

struct ServoState {
  MotorAngles smoothed;  // first-order smoothing memory, starts at rest
};

/// Clamp each pose component independently to its (possibly asymmetric) range.
PlatformPose clamp_pose(const PlatformPose& pose, const PlatformLimits& limits);

/// Pose -> motor targets. Common mode s = pitch/pitch_scale, differential
/// d = roll/roll_scale, rear = yaw/yaw_scale. When |s| + |d| exceeds the
/// motor range both are scaled proportionally, preserving their ratio.
MotorAngles inverse_kinematics(const PlatformPose& pose, const PlatformLimits& limits);

/// Motors -> achieved pose; exact inverse of the unsaturated inverse map.
PlatformPose forward_kinematics(const MotorAngles& motors, const PlatformLimits& limits);

/// Move each motor toward its target by at most motor_rate * dt.
MotorAngles rate_limit_step(const MotorAngles& prev, const MotorAngles& target, double dt_s,
                            const PlatformLimits& limits);

/// Per motor: dead zone (|cmd| < dead_zone -> 0), clip to +/-clip, then
/// optional first-order smoothing.
MotorAngles apply_servo_shaping(const MotorAngles& cmd, ServoState& state,
                                const ServoParams& params, double dt_s);

/// Full command chain for one rig: clamp pose, inverse kinematics, servo
/// shaping, physical rate limit. Keeps the achieved motor angles.
class PlatformRig {
 public:
  PlatformRig() = default;
  PlatformRig(const PlatformLimits& limits, const ServoParams& servo);

  struct StepResult {
    PlatformPose achieved_pose;
    MotorAngles achieved_motors;
    bool rate_limited = false;  // some motor could not reach its shaped target this step
  };

  StepResult step(const CueTarget& target, double dt_s);

  const MotorAngles& motors() const { return motors_; }
  PlatformPose pose() const { return forward_kinematics(motors_, limits_); }
  const PlatformLimits& limits() const { return limits_; }

 private:
  PlatformLimits limits_;
  ServoParams servo_;
  ServoState servo_state_;
  MotorAngles motors_;
};

}  // namespace cuesim
