#include "cuesim/platform_model.hpp"

#include <algorithm>
#include <cmath>

namespace cuesim {

void PlatformLimits::validate() const {
  require(pitch_min_deg < 0.0 && pitch_max_deg > 0.0 && pitch_min_deg < pitch_max_deg,
          "platform.pitch range: must straddle 0 with min < max");
  require(roll_limit_deg > 0.0, "platform.roll_limit_deg: must be > 0");
  require(yaw_limit_deg > 0.0, "platform.yaw_limit_deg: must be > 0");
  require(motor_limit_deg > 0.0, "platform.motor_limit_deg: must be > 0");
  require(motor_rate_deg_per_s > 0.0, "platform.motor_rate_deg_per_s: must be > 0");
}

void ServoParams::validate(const PlatformLimits& limits) const {
  require(dead_zone_deg >= 0.0, "platform.servo.dead_zone_deg: must be >= 0");
  require(clip_deg > 0.0 && clip_deg <= limits.motor_limit_deg,
          "platform.servo.clip_deg: must be in (0, motor_limit_deg]");
  require(smoothing_time_constant_s >= 0.0,
          "platform.servo.smoothing_time_constant_s: must be >= 0");
}

PlatformPose clamp_pose(const PlatformPose& pose, const PlatformLimits& limits) {
  limits.validate();
  require(std::isfinite(pose.pitch_deg) && std::isfinite(pose.roll_deg) &&
              std::isfinite(pose.yaw_deg),
          "clamp_pose: pose must be finite");
  PlatformPose out;
  out.pitch_deg = clamp(pose.pitch_deg, limits.pitch_min_deg, limits.pitch_max_deg);
  out.roll_deg = clamp(pose.roll_deg, -limits.roll_limit_deg, limits.roll_limit_deg);
  out.yaw_deg = clamp(pose.yaw_deg, -limits.yaw_limit_deg, limits.yaw_limit_deg);
  return out;
}

MotorAngles inverse_kinematics(const PlatformPose& pose, const PlatformLimits& limits) {
  double common = pose.pitch_deg / limits.pitch_scale();
  double differential = pose.roll_deg / limits.roll_scale();

  const double total = std::abs(common) + std::abs(differential);
  if (total > limits.motor_limit_deg) {
    const double scale = limits.motor_limit_deg / total;
    common *= scale;
    differential *= scale;
  }

  MotorAngles motors;
  motors.front_left_deg = common + differential;
  motors.front_right_deg = common - differential;
  motors.rear_deg = clamp(pose.yaw_deg / limits.yaw_scale(), -limits.motor_limit_deg,
                          limits.motor_limit_deg);
  return motors;
}

PlatformPose forward_kinematics(const MotorAngles& motors, const PlatformLimits& limits) {
  PlatformPose pose;
  pose.pitch_deg = limits.pitch_scale() * (motors.front_left_deg + motors.front_right_deg) / 2.0;
  pose.roll_deg = limits.roll_scale() * (motors.front_left_deg - motors.front_right_deg) / 2.0;
  pose.yaw_deg = limits.yaw_scale() * motors.rear_deg;
  return pose;
}

namespace {

double move_toward(double from, double to, double max_delta) {
  const double delta = clamp(to - from, -max_delta, max_delta);
  return from + delta;
}

double shape_motor(double cmd, double smoothed, const ServoParams& params, double dt_s,
                   double* out_smoothed) {
  if (std::abs(cmd) < params.dead_zone_deg) cmd = 0.0;
  cmd = clamp(cmd, -params.clip_deg, params.clip_deg);
  if (params.smoothing_time_constant_s > 0.0) {
    const double alpha = dt_s / (params.smoothing_time_constant_s + dt_s);
    cmd = smoothed + alpha * (cmd - smoothed);
  }
  *out_smoothed = cmd;
  return cmd;
}

}  // namespace

MotorAngles rate_limit_step(const MotorAngles& prev, const MotorAngles& target, double dt_s,
                            const PlatformLimits& limits) {
  require(dt_s > 0.0, "rate_limit_step: dt must be > 0");
  const double max_delta = limits.motor_rate_deg_per_s * dt_s;
  MotorAngles out;
  out.front_left_deg = move_toward(prev.front_left_deg, target.front_left_deg, max_delta);
  out.front_right_deg = move_toward(prev.front_right_deg, target.front_right_deg, max_delta);
  out.rear_deg = move_toward(prev.rear_deg, target.rear_deg, max_delta);
  return out;
}

MotorAngles apply_servo_shaping(const MotorAngles& cmd, ServoState& state,
                                const ServoParams& params, double dt_s) {
  require(dt_s > 0.0, "apply_servo_shaping: dt must be > 0");
  MotorAngles out;
  out.front_left_deg =
      shape_motor(cmd.front_left_deg, state.smoothed.front_left_deg, params, dt_s,
                  &state.smoothed.front_left_deg);
  out.front_right_deg =
      shape_motor(cmd.front_right_deg, state.smoothed.front_right_deg, params, dt_s,
                  &state.smoothed.front_right_deg);
  out.rear_deg =
      shape_motor(cmd.rear_deg, state.smoothed.rear_deg, params, dt_s, &state.smoothed.rear_deg);
  return out;
}

PlatformRig::PlatformRig(const PlatformLimits& limits, const ServoParams& servo)
    : limits_(limits), servo_(servo) {
  limits_.validate();
  servo_.validate(limits_);
}

PlatformRig::StepResult PlatformRig::step(const CueTarget& target, double dt_s) {
  const PlatformPose clamped =
      clamp_pose({target.pitch_deg, target.roll_deg, target.yaw_deg}, limits_);
  const MotorAngles ik = inverse_kinematics(clamped, limits_);
  const MotorAngles shaped = apply_servo_shaping(ik, servo_state_, servo_, dt_s);

  const double max_delta = limits_.motor_rate_deg_per_s * dt_s;
  const bool limited = std::abs(shaped.front_left_deg - motors_.front_left_deg) > max_delta ||
                       std::abs(shaped.front_right_deg - motors_.front_right_deg) > max_delta ||
                       std::abs(shaped.rear_deg - motors_.rear_deg) > max_delta;

  motors_ = rate_limit_step(motors_, shaped, dt_s, limits_);
  return {forward_kinematics(motors_, limits_), motors_, limited};
}

}  // namespace cuesim
