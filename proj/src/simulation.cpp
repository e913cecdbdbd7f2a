#include "cuesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace cuesim {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

/// Everything that advances when the scheduler runs a physics step.
class ScenarioEngine {
 public:
  explicit ScenarioEngine(const RunConfig& cfg)
      : cfg_(cfg),
        track_(build_track(cfg.track)),
        rig_(cfg.platform, cfg.servo),
        physics_step_s_(cfg.scheduler.mode == PipelineMode::PhysicsOnUpdate
                            ? cfg.scheduler.display_period_s()
                            : cfg.scheduler.fixed_step_s) {
    conditioner_ = PedalConditioner({cfg.input.time_constant_s, physics_step_s_},
                                    {cfg.input.brake_time_constant_s, physics_step_s_},
                                    cfg.input.idle_drive);

    // Place the vehicle on the left-lane centerline at the start line.
    const TrackSample start = sample_track(track_, 0.0);
    vehicle_.heading_rad = start.heading_rad;
    vehicle_.position_m = {
        start.position_m.x - std::sin(start.heading_rad) * track_.left_lane_offset_m(),
        start.position_m.y + std::cos(start.heading_rad) * track_.left_lane_offset_m(),
        start.position_m.z};

    sample_driver();
  }

  void physics_step(double dt_s) {
    const ConditionedCommand cmd = conditioner_.step(input_);
    const Vec3 prev_velocity = vehicle_.velocity_mps;
    vehicle_ = step_vehicle(vehicle_, cmd, input_.steering_deg, cfg_.vehicle, dt_s);
    accel_ = accel_by_differencing(prev_velocity, vehicle_.velocity_mps, vehicle_.heading_rad,
                                   dt_s);
    centripetal_ = centripetal_accel(vehicle_.speed_mps, vehicle_.yaw_rate_rps);
    cue_ = compose_cue_frame(accel_, vehicle_.speed_mps, vehicle_.yaw_rate_rps, cueing_,
                             cfg_.cueing, dt_s);
    const auto rig = rig_.step(cue_, dt_s);
    pose_ = rig.achieved_pose;
    motors_ = rig.achieved_motors;
    if (rig.rate_limited) ++rate_limit_saturations_;
  }

  /// Sample the scripted driver against the freshly rendered state; the new
  /// input drives the next frame's physics (input one frame behind).
  bool end_frame(const FrameRecord& rec, std::vector<TelemetryRow>* rows) {
    const bool crash = sample_driver();

    TelemetryRow row;
    row.frame_index = rec.frame_index;
    row.sim_time_s = rec.input_sample_time_s;
    row.throttle_raw = input_.throttle;
    row.throttle_filtered = conditioner_.throttle_output();
    row.brake_filtered = conditioner_.brake_output();
    row.steering_deg = input_.steering_deg;
    row.gear = input_.gear;
    row.speed_mps = vehicle_.speed_mps;
    row.accel_long = accel_.longitudinal_mps2;
    row.accel_lat = accel_.lateral_mps2;
    row.centripetal = centripetal_;
    row.yaw_rate = vehicle_.yaw_rate_rps;
    row.cue_pitch_deg = cue_.pitch_deg;
    row.cue_roll_deg = cue_.roll_deg;
    row.cue_yaw_deg = cue_.yaw_deg;
    row.pose_pitch_deg = pose_.pitch_deg;
    row.pose_roll_deg = pose_.roll_deg;
    row.pose_yaw_deg = pose_.yaw_deg;
    row.motor_fl_deg = motors_.front_left_deg;
    row.motor_fr_deg = motors_.front_right_deg;
    row.motor_rear_deg = motors_.rear_deg;
    row.input_latency_ms = frame_input_latency_ms(rec);
    row.provenance_mismatch_ms = frame_mismatch_ms(rec);
    row.crash_flag = crash;
    rows->push_back(row);

    if (crash) ++crash_events_;
    return !crash;  // a crash terminates the scenario
  }

  const Track& track() const { return track_; }
  std::int64_t rate_limit_saturations() const { return rate_limit_saturations_; }
  std::int64_t crash_events() const { return crash_events_; }
  std::int64_t laps_completed() const {
    return static_cast<std::int64_t>(
        std::floor(std::max(0.0, driver_state_.path_arclength_m) / track_.lap_length_m));
  }

 private:
  bool sample_driver() {
    const DriverStep step = scripted_driver_step(driver_state_, vehicle_, track_, cfg_.driver,
                                                 cfg_.scheduler.display_period_s());
    input_ = step.input;
    return step.crash_event;
  }

  RunConfig cfg_;
  Track track_;
  PlatformRig rig_;
  double physics_step_s_;
  PedalConditioner conditioner_;
  VehicleState vehicle_;
  DriverScriptState driver_state_;
  DriverInput input_;
  CueingState cueing_;
  BodyAccel accel_;
  double centripetal_ = 0.0;
  CueTarget cue_;
  PlatformPose pose_;
  MotorAngles motors_;
  std::int64_t rate_limit_saturations_ = 0;
  std::int64_t crash_events_ = 0;
};

}  // namespace

std::string telemetry_header() {
  return "frame_index,sim_time_s,throttle_raw,throttle_filtered,brake_filtered,steering_deg,"
         "gear,speed_mps,accel_long,accel_lat,centripetal,yaw_rate,cue_pitch_deg,cue_roll_deg,"
         "cue_yaw_deg,pose_pitch_deg,pose_roll_deg,pose_yaw_deg,motor_fl_deg,motor_fr_deg,"
         "motor_rear_deg,input_latency_ms,provenance_mismatch_ms,crash_flag";
}

std::string telemetry_csv(const std::vector<TelemetryRow>& rows) {
  std::string out = telemetry_header();
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.frame_index);
    out += ',';
    out += format_double(r.sim_time_s);
    for (double v : {r.throttle_raw, r.throttle_filtered, r.brake_filtered, r.steering_deg}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += to_string(r.gear);
    for (double v : {r.speed_mps, r.accel_long, r.accel_lat, r.centripetal, r.yaw_rate,
                     r.cue_pitch_deg, r.cue_roll_deg, r.cue_yaw_deg, r.pose_pitch_deg,
                     r.pose_roll_deg, r.pose_yaw_deg, r.motor_fl_deg, r.motor_fr_deg,
                     r.motor_rear_deg, r.input_latency_ms, r.provenance_mismatch_ms}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += r.crash_flag ? '1' : '0';
    out += '\n';
  }
  return out;
}

ScenarioResult simulate_scenario(const RunConfig& cfg) {
  cfg.validate();
  ScenarioResult result;

  const std::vector<double> trace = make_trace(cfg);
  if (trace.empty()) return result;  // zero duration: header-only telemetry

  ScenarioEngine engine(cfg);
  result.records = run_pipeline(
      cfg.scheduler, trace, [&](double, double dt) { engine.physics_step(dt); },
      [&](const FrameRecord& rec) { return engine.end_frame(rec, &result.rows); });

  result.latency = latency_report(result.records);
  for (const auto& row : result.rows) {
    result.pose_pitch_max_deg = std::max(result.pose_pitch_max_deg, row.pose_pitch_deg);
    result.pose_pitch_min_deg = std::min(result.pose_pitch_min_deg, row.pose_pitch_deg);
    result.pose_roll_abs_max_deg =
        std::max(result.pose_roll_abs_max_deg, std::abs(row.pose_roll_deg));
    result.pose_yaw_abs_max_deg =
        std::max(result.pose_yaw_abs_max_deg, std::abs(row.pose_yaw_deg));
  }
  result.rate_limit_saturation_steps = engine.rate_limit_saturations();
  result.crash_events = engine.crash_events();
  result.laps_completed = engine.laps_completed();
  return result;
}

namespace {

nlohmann::json latency_to_json(const LatencyReport& rep) {
  return {{"frames", rep.frames},
          {"mean_input_latency_ms", rep.mean_input_latency_ms},
          {"max_input_latency_ms", rep.max_input_latency_ms},
          {"mean_mismatch_ms", rep.mean_mismatch_ms},
          {"max_mismatch_ms", rep.max_mismatch_ms},
          {"nonzero_mismatch_fraction", rep.nonzero_mismatch_fraction},
          {"mean_render_age_ms", rep.mean_render_age_ms},
          {"max_render_age_ms", rep.max_render_age_ms},
          {"dropped_frames", rep.dropped_frames}};
}

nlohmann::json mismatch_histogram(const std::vector<FrameRecord>& records) {
  std::map<std::string, std::int64_t> bins;
  for (const auto& r : records) {
    char key[32];
    std::snprintf(key, sizeof(key), "%.4f", frame_mismatch_ms(r));
    ++bins[key];
  }
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : bins) out[k] = v;
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write " + path.string());
  out << content;
}

}  // namespace

nlohmann::json metrics_to_json(const RunConfig& cfg, const ScenarioResult& result) {
  nlohmann::json j;
  j["telemetry_schema_version"] = kTelemetrySchemaVersion;
  j["mode"] = to_string(cfg.scheduler.mode);
  j["seed"] = cfg.run.seed;
  j["duration_s"] = cfg.run.duration_s;
  j["frames"] = static_cast<std::int64_t>(result.rows.size());
  j["latency"] = latency_to_json(result.latency);
  j["pose"] = {{"pitch_max_deg", result.pose_pitch_max_deg},
               {"pitch_min_deg", result.pose_pitch_min_deg},
               {"roll_abs_max_deg", result.pose_roll_abs_max_deg},
               {"yaw_abs_max_deg", result.pose_yaw_abs_max_deg}};
  j["motor_rate_limit_saturation_steps"] = result.rate_limit_saturation_steps;
  j["crash_events"] = result.crash_events;
  j["laps_completed"] = result.laps_completed;
  return j;
}

ScenarioResult run_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  ScenarioResult result = simulate_scenario(cfg);
  write_file(dir / "telemetry.csv", telemetry_csv(result.rows));
  write_file(dir / "metrics.json", metrics_to_json(cfg, result).dump(2) + "\n");
  return result;
}

nlohmann::json compare_pipelines(const RunConfig& cfg) {
  RunConfig fixed_cfg = cfg;
  fixed_cfg.scheduler.mode = PipelineMode::DefaultFixedStep;
  RunConfig update_cfg = cfg;
  update_cfg.scheduler.mode = PipelineMode::PhysicsOnUpdate;

  const ScenarioResult fixed = simulate_scenario(fixed_cfg);
  const ScenarioResult update = simulate_scenario(update_cfg);

  nlohmann::json j;
  j["telemetry_schema_version"] = kTelemetrySchemaVersion;
  j["seed"] = cfg.run.seed;
  j["duration_s"] = cfg.run.duration_s;
  j["default_fixed_step"] = {{"latency", latency_to_json(fixed.latency)},
                             {"laps_completed", fixed.laps_completed},
                             {"crash_events", fixed.crash_events}};
  j["physics_on_update"] = {{"latency", latency_to_json(update.latency)},
                            {"laps_completed", update.laps_completed},
                            {"crash_events", update.crash_events}};
  j["mismatch_histogram_ms"] = {{"default_fixed_step", mismatch_histogram(fixed.records)},
                                {"physics_on_update", mismatch_histogram(update.records)}};
  return j;
}

nlohmann::json export_track(const TrackParams& params) {
  const Track track = build_track(params);

  nlohmann::json segments = nlohmann::json::array();
  for (const auto& seg : track.segments) {
    nlohmann::json s = {{"kind", to_string(seg.kind)},
                        {"length_m", seg.length_m},
                        {"grade", seg.grade},
                        {"start_arclength_m", seg.start_arclength_m},
                        {"start",
                         {{"x_m", seg.start_x_m},
                          {"y_m", seg.start_y_m},
                          {"z_m", seg.start_z_m},
                          {"heading_rad", seg.start_heading_rad}}}};
    if (seg.kind == SegmentKind::Arc) {
      s["radius_m"] = seg.radius_m;
      s["sweep_deg"] = seg.sweep_deg;
      s["direction"] = seg.direction == 1 ? "left" : "right";
      s["grade_kind"] = to_string(seg.grade_kind);
    }
    segments.push_back(s);
  }

  nlohmann::json centerline = nlohmann::json::array();
  const auto whole_meters = static_cast<std::int64_t>(std::floor(track.lap_length_m));
  for (std::int64_t s = 0; s <= whole_meters; ++s) {
    const TrackSample sample = sample_track(track, static_cast<double>(s));
    centerline.push_back({sample.position_m.x, sample.position_m.y, sample.position_m.z});
  }
  // Close the polyline exactly.
  const TrackSample first = sample_track(track, 0.0);
  centerline.push_back({first.position_m.x, first.position_m.y, first.position_m.z});

  return {{"lap_length_m", track.lap_length_m},
          {"lane_width_m", track.lane_width_m},
          {"lane_count", track.lane_count},
          {"segments", segments},
          {"centerline_spacing_m", 1.0},
          {"centerline", centerline}};
}

}  // namespace cuesim
