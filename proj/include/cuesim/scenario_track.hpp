#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cuesim/input_conditioning.hpp"
#include "cuesim/types.hpp"
#include "cuesim/vehicle_dynamics.hpp"

namespace cuesim {

enum class GradeKind { Incline, Decline, Plateau };
enum class SegmentKind { Straight, Arc };

const char* to_string(GradeKind g);
const char* to_string(SegmentKind k);

struct TrackSegment {
  SegmentKind kind = SegmentKind::Straight;
  double length_m = 0.0;  // horizontal arclength
  double grade = 0.0;     // dz per meter of horizontal arclength
  GradeKind grade_kind = GradeKind::Plateau;
  // Arc-only:
  double radius_m = 0.0;
  double sweep_deg = 0.0;
  int direction = 0;  // +1 left, -1 right
  // Placement, filled by build_track:
  double start_x_m = 0.0;
  double start_y_m = 0.0;
  double start_z_m = 0.0;
  double start_heading_rad = 0.0;
  double start_arclength_m = 0.0;
};

struct TrackParams {
  double straight_length_m = 150.0;  // nominal; adjusted analytically for loop closure
  double grade_magnitude = 0.05;     // rise/run on inclined and declined turns
  double lane_width_m = 3.5;
  int lane_count = 4;
  double arc_radius_m = 100.0;
  // Optional deterministic reordering of the nine turns.
  std::optional<std::uint64_t> shuffle_seed;

  void validate() const;
};

/// Closed 9-turn highway loop: every (sweep, grade) combination of
/// {30, 60, 90} degrees x {incline, decline, plateau} appears exactly once,
/// all at the same radius, separated by level straights. Straight lengths
/// get a least-norm analytic adjustment so the loop closes exactly.
struct Track {
  std::vector<TrackSegment> segments;
  double lane_width_m = 3.5;
  int lane_count = 4;
  double lap_length_m = 0.0;

  double road_half_width_m() const { return lane_count * lane_width_m / 2.0; }
  // Left lane of the travel direction in right-hand traffic: offset to the
  // left of the road centerline by half a lane.
  double left_lane_offset_m() const { return lane_width_m / 2.0; }
};

struct TrackSample {
  Vec3 position_m;           // centerline point
  double heading_rad = 0.0;  // tangent direction
  double grade = 0.0;
};

Track build_track(const TrackParams& params);

/// Exact analytic evaluation; arclength wraps modulo the lap length.
TrackSample sample_track(const Track& track, double arclength_m);

struct DriverScriptParams {
  double target_speed_mps = 25.0;
  double lookahead_m = 8.0;
  double speed_gain = 1.0;  // pedal fraction per m/s of speed error
  // Plant calibration the controller steers with; the scenario runner syncs
  // these from the vehicle parameters.
  double wheelbase_m = 2.7;
  double max_steer_road_angle_deg = 35.0;
  double drag_coefficient_per_m = 0.0025;
  double max_drive_accel_mps2 = 4.0;

  void validate() const;
};

/// Path-following memory: the driver's running estimate of its arclength
/// along the lap, kept unwrapped so completed laps can be counted.
struct DriverScriptState {
  double path_arclength_m = 0.0;
  bool crashed = false;
};

struct DriverStep {
  DriverInput input;
  bool crash_event = false;
  double lateral_offset_m = 0.0;  // signed offset from road centerline, + left
};

/// Pure-pursuit steering toward a lookahead point on the left-lane
/// centerline plus proportional speed control. Gear stays in Drive. Leaving
/// the road surface raises a crash event (scenario termination, not an
/// error).
DriverStep scripted_driver_step(DriverScriptState& state, const VehicleState& vehicle,
                                const Track& track, const DriverScriptParams& params,
                                double dt_s);

}  // namespace cuesim
