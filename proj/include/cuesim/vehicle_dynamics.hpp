#pragma once

#include "cuesim/input_conditioning.hpp"
#include "cuesim/types.hpp"

namespace cuesim {

/// Kinematic state of the simulated car, world frame. Heading is the yaw
/// angle in (-pi, pi]; speed is the magnitude of the horizontal velocity.
/// The model is planar: velocity.z stays 0 and position.z is carried along.
struct VehicleState {
  Vec3 position_m;
  Vec3 velocity_mps;
  double heading_rad = 0.0;
  double yaw_rate_rps = 0.0;
  double speed_mps = 0.0;
};

struct VehicleParams {
  double wheelbase_m = 2.7;
  double max_drive_accel_mps2 = 4.0;
  double max_brake_decel_mps2 = 8.0;
  double drag_coefficient_per_m = 0.0025;  // quadratic drag; top speed ~40 m/s at full drive
  double max_steer_road_angle_deg = 35.0;  // road-wheel angle at full (+/-450 deg) wheel travel
  double reverse_speed_cap_mps = 5.0;

  void validate() const;
};

/// Body-frame acceleration. Convention: +longitudinal forward, +lateral left,
/// +vertical up.
struct BodyAccel {
  double longitudinal_mps2 = 0.0;
  double lateral_mps2 = 0.0;
  double vertical_mps2 = 0.0;
};

struct HapticCalibration {
  double freq_per_mps = 2.0;   // Hz per m/s of vehicle speed
  double mag_per_mps = 0.03;   // magnitude fraction per m/s
  double freq_cap_hz = 60.0;

  void validate() const;
};

/// Wheel vibration cue; frequency and magnitude rise with vehicle speed.
struct HapticCue {
  double frequency_hz = 0.0;
  double magnitude = 0.0;  // [0, 1]
};

/// Advance the kinematic bicycle model one step (semi-implicit Euler).
/// Road-wheel angle is the wheel angle scaled from +/-450 deg down to
/// +/-max_steer_road_angle_deg. Reverse negates the drive direction and caps
/// backward speed; brake and drag oppose motion and cannot reverse it.
VehicleState step_vehicle(const VehicleState& state, const ConditionedCommand& cmd,
                          double steering_deg, const VehicleParams& params, double dt_s);

/// Frame-difference acceleration: (v_curr - v_prev)/dt rotated into the body
/// frame by the given heading. This per-frame difference, not an analytic
/// derivative, is the signal the tilt cueing consumes.
BodyAccel accel_by_differencing(const Vec3& v_prev_mps, const Vec3& v_curr_mps, double heading_rad,
                                double dt_s);

/// speed * yaw_rate, signed by turn direction (+ for left turns).
double centripetal_accel(double speed_mps, double yaw_rate_rps);

HapticCue haptic_cue(double speed_mps, const HapticCalibration& calibration);

}  // namespace cuesim
