#include "cuesim/vehicle_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace cuesim {

void VehicleParams::validate() const {
  require(wheelbase_m > 0.0, "vehicle.wheelbase_m: must be > 0");
  require(max_drive_accel_mps2 > 0.0, "vehicle.max_drive_accel_mps2: must be > 0");
  require(max_brake_decel_mps2 > 0.0, "vehicle.max_brake_decel_mps2: must be > 0");
  require(drag_coefficient_per_m > 0.0, "vehicle.drag_coefficient_per_m: must be > 0");
  require(max_steer_road_angle_deg > 0.0 && max_steer_road_angle_deg < 90.0,
          "vehicle.max_steer_road_angle_deg: must be in (0, 90)");
  require(reverse_speed_cap_mps > 0.0, "vehicle.reverse_speed_cap_mps: must be > 0");
}

void HapticCalibration::validate() const {
  require(freq_per_mps >= 0.0, "vehicle.haptic.freq_per_mps: must be >= 0");
  require(mag_per_mps >= 0.0, "vehicle.haptic.mag_per_mps: must be >= 0");
  require(freq_cap_hz >= 0.0, "vehicle.haptic.freq_cap_hz: must be >= 0");
}

VehicleState step_vehicle(const VehicleState& state, const ConditionedCommand& cmd,
                          double steering_deg, const VehicleParams& params, double dt_s) {
  params.validate();
  require(dt_s > 0.0 && std::isfinite(dt_s), "step_vehicle: dt must be > 0");
  require(std::isfinite(steering_deg), "step_vehicle: steering must be finite");

  // Signed longitudinal speed: + along heading, - when reversing.
  const double cos_h = std::cos(state.heading_rad);
  const double sin_h = std::sin(state.heading_rad);
  double u = state.velocity_mps.x * cos_h + state.velocity_mps.y * sin_h;

  const double dir =
      cmd.gear == Gear::Drive ? 1.0 : (cmd.gear == Gear::Reverse ? -1.0 : 0.0);
  u += dir * cmd.drive_demand * params.max_drive_accel_mps2 * dt_s;

  // Brake and drag oppose the current motion and stop at zero.
  const double resist =
      (cmd.brake_demand * params.max_brake_decel_mps2 + params.drag_coefficient_per_m * u * u) *
      dt_s;
  if (u > 0.0) {
    u = std::max(0.0, u - resist);
  } else if (u < 0.0) {
    u = std::min(0.0, u + resist);
  }
  if (cmd.gear == Gear::Reverse) u = std::max(u, -params.reverse_speed_cap_mps);

  const double road_angle_rad =
      deg_to_rad(steering_deg / 450.0 * params.max_steer_road_angle_deg);

  VehicleState next = state;
  next.yaw_rate_rps = u * std::tan(road_angle_rad) / params.wheelbase_m;
  next.heading_rad = wrap_angle(state.heading_rad + next.yaw_rate_rps * dt_s);
  next.velocity_mps = {u * std::cos(next.heading_rad), u * std::sin(next.heading_rad), 0.0};
  next.position_m = state.position_m + next.velocity_mps * dt_s;
  next.speed_mps = std::abs(u);
  return next;
}

BodyAccel accel_by_differencing(const Vec3& v_prev_mps, const Vec3& v_curr_mps,
                                double heading_rad, double dt_s) {
  require(dt_s > 0.0 && std::isfinite(dt_s), "accel_by_differencing: dt must be > 0");
  const Vec3 a = (v_curr_mps - v_prev_mps) * (1.0 / dt_s);
  const double cos_h = std::cos(heading_rad);
  const double sin_h = std::sin(heading_rad);
  BodyAccel body;
  body.longitudinal_mps2 = a.x * cos_h + a.y * sin_h;
  body.lateral_mps2 = -a.x * sin_h + a.y * cos_h;
  body.vertical_mps2 = a.z;
  return body;
}

double centripetal_accel(double speed_mps, double yaw_rate_rps) {
  return speed_mps * yaw_rate_rps;
}

HapticCue haptic_cue(double speed_mps, const HapticCalibration& calibration) {
  calibration.validate();
  require(speed_mps >= 0.0, "haptic_cue: speed must be >= 0");
  HapticCue cue;
  cue.frequency_hz = std::min(calibration.freq_cap_hz, calibration.freq_per_mps * speed_mps);
  cue.magnitude = std::min(1.0, calibration.mag_per_mps * speed_mps);
  return cue;
}

}  // namespace cuesim
