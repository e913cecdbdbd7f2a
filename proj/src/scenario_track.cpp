#include "cuesim/scenario_track.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace cuesim {

const char* to_string(GradeKind g) {
  switch (g) {
    case GradeKind::Incline: return "incline";
    case GradeKind::Decline: return "decline";
    case GradeKind::Plateau: return "plateau";
  }
  return "?";
}

const char* to_string(SegmentKind k) {
  return k == SegmentKind::Straight ? "straight" : "arc";
}

void TrackParams::validate() const {
  require(straight_length_m > 0.0, "track.straight_length_m: must be > 0");
  require(grade_magnitude >= 0.0 && grade_magnitude < 1.0,
          "track.grade_magnitude: must be in [0, 1)");
  require(lane_width_m > 0.0, "track.lane_width_m: must be > 0");
  require(lane_count >= 1, "track.lane_count: must be >= 1");
  require(arc_radius_m > 0.0, "track.arc_radius_m: must be > 0");
}

void DriverScriptParams::validate() const {
  require(target_speed_mps > 0.0, "driver.target_speed_mps: must be > 0");
  require(lookahead_m > 0.0, "driver.lookahead_m: must be > 0");
  require(speed_gain > 0.0, "driver.speed_gain: must be > 0");
}

namespace {

struct ArcSpec {
  int sweep_deg;
  GradeKind grade_kind;
};

// Fixed default ordering of the nine (sweep, grade) turns.
constexpr std::array<ArcSpec, 9> kDefaultOrder = {{
    {90, GradeKind::Plateau},
    {30, GradeKind::Incline},
    {60, GradeKind::Plateau},
    {90, GradeKind::Incline},
    {30, GradeKind::Decline},
    {60, GradeKind::Incline},
    {90, GradeKind::Decline},
    {30, GradeKind::Plateau},
    {60, GradeKind::Decline},
}};

struct Pose2 {
  double x = 0.0, y = 0.0, heading = 0.0;
};

Pose2 advance_straight(Pose2 p, double length) {
  p.x += length * std::cos(p.heading);
  p.y += length * std::sin(p.heading);
  return p;
}

Pose2 advance_arc(Pose2 p, double radius, double sweep_deg, int direction) {
  // Turn center sits one radius along the left (direction=+1) or right
  // (direction=-1) normal of the heading.
  const double nx = -std::sin(p.heading) * direction;
  const double ny = std::cos(p.heading) * direction;
  const double centre_x = p.x + radius * nx;
  const double centre_y = p.y + radius * ny;
  const double theta = deg_to_rad(sweep_deg) * direction;
  const double rx = p.x - centre_x;
  const double ry = p.y - centre_y;
  Pose2 out;
  out.x = centre_x + rx * std::cos(theta) - ry * std::sin(theta);
  out.y = centre_y + rx * std::sin(theta) + ry * std::cos(theta);
  out.heading = p.heading + theta;
  return out;
}

// End position and per-straight headings for a given direction pattern.
struct LayoutProbe {
  double end_x, end_y;
  std::array<double, 10> straight_headings;
};

LayoutProbe probe_layout(const std::array<ArcSpec, 9>& order, const std::array<int, 9>& dirs,
                         const std::array<double, 10>& straights, double radius) {
  Pose2 p;
  LayoutProbe probe{};
  for (int i = 0; i < 9; ++i) {
    probe.straight_headings[i] = p.heading;
    p = advance_straight(p, straights[i]);
    p = advance_arc(p, radius, order[i].sweep_deg, dirs[i]);
  }
  probe.straight_headings[9] = p.heading;
  p = advance_straight(p, straights[9]);
  probe.end_x = p.x;
  probe.end_y = p.y;
  return probe;
}

// Least-norm adjustment of the ten straight lengths closing the position
// gap: solve sum(delta_i * u_i) = -gap via 2x2 normal equations.
bool close_straights(const std::array<ArcSpec, 9>& order, const std::array<int, 9>& dirs,
                     double nominal, double radius, std::array<double, 10>* out) {
  std::array<double, 10> straights;
  straights.fill(nominal);
  const LayoutProbe probe = probe_layout(order, dirs, straights, radius);

  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  std::array<double, 10> ux, uy;
  for (int i = 0; i < 10; ++i) {
    ux[i] = std::cos(probe.straight_headings[i]);
    uy[i] = std::sin(probe.straight_headings[i]);
    a11 += ux[i] * ux[i];
    a12 += ux[i] * uy[i];
    a22 += uy[i] * uy[i];
  }
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-9) return false;
  const double gx = -probe.end_x, gy = -probe.end_y;
  const double lx = (a22 * gx - a12 * gy) / det;
  const double ly = (a11 * gy - a12 * gx) / det;
  for (int i = 0; i < 10; ++i) straights[i] = nominal + ux[i] * lx + uy[i] * ly;
  *out = straights;
  return true;
}

// Direction patterns with right turns totalling 90 degrees, so the signed
// sweeps sum to one full counterclockwise turn and headings close exactly.
std::vector<std::array<int, 9>> direction_candidates(const std::array<ArcSpec, 9>& order) {
  std::vector<int> idx30, idx60, idx90;
  for (int i = 0; i < 9; ++i) {
    if (order[i].sweep_deg == 30) idx30.push_back(i);
    if (order[i].sweep_deg == 60) idx60.push_back(i);
    if (order[i].sweep_deg == 90) idx90.push_back(i);
  }
  std::vector<std::array<int, 9>> out;
  auto make = [](std::initializer_list<int> rights) {
    std::array<int, 9> d;
    d.fill(1);
    for (int i : rights) d[i] = -1;
    return d;
  };
  for (int i : idx90) out.push_back(make({i}));
  for (int i : idx30)
    for (int j : idx60) out.push_back(make({i, j}));
  out.push_back(make({idx30[0], idx30[1], idx30[2]}));
  return out;
}

double grade_sign(GradeKind g) {
  return g == GradeKind::Incline ? 1.0 : (g == GradeKind::Decline ? -1.0 : 0.0);
}

}  // namespace

Track build_track(const TrackParams& params) {
  params.validate();

  std::array<ArcSpec, 9> order = kDefaultOrder;
  if (params.shuffle_seed) {
    // Fisher-Yates with explicit draws; std::shuffle is not portable across
    // standard libraries.
    std::mt19937_64 rng(*params.shuffle_seed);
    for (int i = 8; i > 0; --i) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
  }

  // Pick the feasible direction pattern with the largest minimum straight.
  std::array<int, 9> dirs{};
  std::array<double, 10> straights{};
  double best_min = -1e300;
  for (const auto& cand : direction_candidates(order)) {
    std::array<double, 10> adjusted;
    if (!close_straights(order, cand, params.straight_length_m, params.arc_radius_m, &adjusted))
      continue;
    const double min_len = *std::min_element(adjusted.begin(), adjusted.end());
    if (min_len > best_min) {
      best_min = min_len;
      dirs = cand;
      straights = adjusted;
    }
  }
  require(best_min > 1.0,
          "track: loop closure impossible with these parameters (straights would collapse)");

  Track track;
  track.lane_width_m = params.lane_width_m;
  track.lane_count = params.lane_count;

  Pose2 p;
  double z = 0.0;
  double arclength = 0.0;
  auto push = [&](TrackSegment seg) {
    seg.start_x_m = p.x;
    seg.start_y_m = p.y;
    seg.start_z_m = z;
    seg.start_heading_rad = p.heading;
    seg.start_arclength_m = arclength;
    arclength += seg.length_m;
    z += seg.grade * seg.length_m;
    track.segments.push_back(seg);
  };

  for (int i = 0; i < 9; ++i) {
    TrackSegment straight;
    straight.kind = SegmentKind::Straight;
    straight.length_m = straights[i];
    push(straight);
    p = advance_straight(p, straights[i]);

    TrackSegment arc;
    arc.kind = SegmentKind::Arc;
    arc.radius_m = params.arc_radius_m;
    arc.sweep_deg = order[i].sweep_deg;
    arc.direction = dirs[i];
    arc.grade_kind = order[i].grade_kind;
    arc.grade = grade_sign(order[i].grade_kind) * params.grade_magnitude;
    arc.length_m = params.arc_radius_m * deg_to_rad(order[i].sweep_deg);
    push(arc);
    p = advance_arc(p, params.arc_radius_m, order[i].sweep_deg, dirs[i]);
  }
  TrackSegment final_straight;
  final_straight.kind = SegmentKind::Straight;
  final_straight.length_m = straights[9];
  push(final_straight);

  track.lap_length_m = arclength;
  return track;
}

TrackSample sample_track(const Track& track, double arclength_m) {
  require(!track.segments.empty() && track.lap_length_m > 0.0, "sample_track: empty track");
  double s = std::fmod(arclength_m, track.lap_length_m);
  if (s < 0.0) s += track.lap_length_m;

  // Segments are ordered by start arclength; find the one containing s.
  auto it = std::upper_bound(track.segments.begin(), track.segments.end(), s,
                             [](double value, const TrackSegment& seg) {
                               return value < seg.start_arclength_m;
                             });
  const TrackSegment& seg = it == track.segments.begin() ? track.segments.front() : *(it - 1);
  const double u = s - seg.start_arclength_m;

  TrackSample sample;
  sample.grade = seg.grade;
  if (seg.kind == SegmentKind::Straight) {
    sample.heading_rad = seg.start_heading_rad;
    sample.position_m = {seg.start_x_m + u * std::cos(seg.start_heading_rad),
                         seg.start_y_m + u * std::sin(seg.start_heading_rad),
                         seg.start_z_m + u * seg.grade};
  } else {
    const double nx = -std::sin(seg.start_heading_rad) * seg.direction;
    const double ny = std::cos(seg.start_heading_rad) * seg.direction;
    const double cx = seg.start_x_m + seg.radius_m * nx;
    const double cy = seg.start_y_m + seg.radius_m * ny;
    const double theta = (u / seg.radius_m) * seg.direction;
    const double rx = seg.start_x_m - cx;
    const double ry = seg.start_y_m - cy;
    sample.heading_rad = seg.start_heading_rad + theta;
    sample.position_m = {cx + rx * std::cos(theta) - ry * std::sin(theta),
                         cy + rx * std::sin(theta) + ry * std::cos(theta),
                         seg.start_z_m + u * seg.grade};
  }
  return sample;
}

namespace {

struct Projection {
  double arclength = 0.0;
  double distance = 1e300;
};

// Closed-form projection of a point onto one segment's centerline (plan view).
Projection project_on_segment(const TrackSegment& seg, double px, double py) {
  Projection proj;
  if (seg.kind == SegmentKind::Straight) {
    const double ux = std::cos(seg.start_heading_rad);
    const double uy = std::sin(seg.start_heading_rad);
    const double t = clamp((px - seg.start_x_m) * ux + (py - seg.start_y_m) * uy, 0.0,
                           seg.length_m);
    const double qx = seg.start_x_m + t * ux;
    const double qy = seg.start_y_m + t * uy;
    proj.arclength = seg.start_arclength_m + t;
    proj.distance = std::hypot(px - qx, py - qy);
  } else {
    const double nx = -std::sin(seg.start_heading_rad) * seg.direction;
    const double ny = std::cos(seg.start_heading_rad) * seg.direction;
    const double cx = seg.start_x_m + seg.radius_m * nx;
    const double cy = seg.start_y_m + seg.radius_m * ny;
    const double a0 = std::atan2(seg.start_y_m - cy, seg.start_x_m - cx);
    const double ap = std::atan2(py - cy, px - cx);
    const double sweep_rad = deg_to_rad(seg.sweep_deg);
    double along = wrap_angle(ap - a0) * seg.direction;  // angle from arc start
    along = clamp(along, 0.0, sweep_rad);
    const double t = along * seg.radius_m;
    const double theta = along * seg.direction;
    const double rx = seg.start_x_m - cx;
    const double ry = seg.start_y_m - cy;
    const double qx = cx + rx * std::cos(theta) - ry * std::sin(theta);
    const double qy = cy + rx * std::sin(theta) + ry * std::cos(theta);
    proj.arclength = seg.start_arclength_m + t;
    proj.distance = std::hypot(px - qx, py - qy);
  }
  return proj;
}

}  // namespace

DriverStep scripted_driver_step(DriverScriptState& state, const VehicleState& vehicle,
                                const Track& track, const DriverScriptParams& params,
                                double dt_s) {
  params.validate();
  require(dt_s > 0.0, "scripted_driver_step: dt must be > 0");

  const double lap = track.lap_length_m;
  const double prev_s = state.path_arclength_m;
  const double prev_wrapped = std::fmod(std::fmod(prev_s, lap) + lap, lap);

  // Project onto segments within a window around the previous estimate.
  const double window = 30.0 + vehicle.speed_mps * dt_s;
  Projection best;
  for (const auto& seg : track.segments) {
    // Wrap-aware overlap test between [prev-window, prev+window] and the segment.
    double delta = seg.start_arclength_m + seg.length_m * 0.5 - prev_wrapped;
    delta = std::remainder(delta, lap);
    if (std::abs(delta) > window + seg.length_m * 0.5) continue;
    const Projection p = project_on_segment(seg, vehicle.position_m.x, vehicle.position_m.y);
    if (p.distance < best.distance) best = p;
  }
  if (best.distance >= 1e300) best = project_on_segment(track.segments.front(),
                                                        vehicle.position_m.x,
                                                        vehicle.position_m.y);

  // Unwrapped arclength advance, so laps can be counted.
  const double advance = std::remainder(best.arclength - prev_wrapped, lap);
  state.path_arclength_m = prev_s + advance;

  const TrackSample at = sample_track(track, best.arclength);
  const double left_nx = -std::sin(at.heading_rad);
  const double left_ny = std::cos(at.heading_rad);
  const double lateral = (vehicle.position_m.x - at.position_m.x) * left_nx +
                         (vehicle.position_m.y - at.position_m.y) * left_ny;

  DriverStep step;
  step.lateral_offset_m = lateral;
  if (std::abs(lateral) > track.road_half_width_m()) {
    state.crashed = true;
    step.crash_event = true;
  }

  // Pure pursuit toward the left-lane centerline ahead.
  const TrackSample ahead = sample_track(track, best.arclength + params.lookahead_m);
  const double tx = ahead.position_m.x - std::sin(ahead.heading_rad) * track.left_lane_offset_m();
  const double ty = ahead.position_m.y + std::cos(ahead.heading_rad) * track.left_lane_offset_m();

  const double dx = tx - vehicle.position_m.x;
  const double dy = ty - vehicle.position_m.y;
  const double cos_h = std::cos(vehicle.heading_rad);
  const double sin_h = std::sin(vehicle.heading_rad);
  const double local_left = -dx * sin_h + dy * cos_h;
  const double dist_sq = std::max(1.0, dx * dx + dy * dy);
  const double curvature = 2.0 * local_left / dist_sq;

  const double road_angle_rad = std::atan(curvature * params.wheelbase_m);
  double wheel_deg = rad_to_deg(road_angle_rad) / params.max_steer_road_angle_deg * 450.0;
  wheel_deg = clamp(wheel_deg, -450.0, 450.0);

  // Proportional speed control with a drag-holding feedforward.
  const double err = params.target_speed_mps - vehicle.speed_mps;
  const double feedforward = params.drag_coefficient_per_m * vehicle.speed_mps *
                             vehicle.speed_mps / params.max_drive_accel_mps2;
  double throttle = 0.0, brake = 0.0;
  if (err >= 0.0) {
    throttle = clamp(feedforward + params.speed_gain * err, 0.0, 1.0);
  } else {
    brake = clamp(-params.speed_gain * err, 0.0, 1.0);
  }

  step.input.throttle = throttle;
  step.input.brake = brake;
  step.input.steering_deg = wheel_deg;
  step.input.gear = Gear::Drive;
  step.input.validate();
  return step;
}

}  // namespace cuesim
