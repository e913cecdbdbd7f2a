#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cuesim/config.hpp"
#include "cuesim/frame_scheduler.hpp"
#include "cuesim/platform_model.hpp"
#include "cuesim/scenario_track.hpp"

#include <nlohmann/json_fwd.hpp>

namespace cuesim {

inline constexpr int kTelemetrySchemaVersion = 1;  // bump when column order changes

/// One telemetry row per rendered frame, columns in this exact order.
struct TelemetryRow {
  std::int64_t frame_index = 0;
  double sim_time_s = 0.0;
  double throttle_raw = 0.0;
  double throttle_filtered = 0.0;
  double brake_filtered = 0.0;
  double steering_deg = 0.0;
  Gear gear = Gear::Neutral;
  double speed_mps = 0.0;
  double accel_long = 0.0;
  double accel_lat = 0.0;
  double centripetal = 0.0;
  double yaw_rate = 0.0;
  double cue_pitch_deg = 0.0;
  double cue_roll_deg = 0.0;
  double cue_yaw_deg = 0.0;
  double pose_pitch_deg = 0.0;
  double pose_roll_deg = 0.0;
  double pose_yaw_deg = 0.0;
  double motor_fl_deg = 0.0;
  double motor_fr_deg = 0.0;
  double motor_rear_deg = 0.0;
  double input_latency_ms = 0.0;
  double provenance_mismatch_ms = 0.0;
  bool crash_flag = false;
};

std::string telemetry_header();
std::string telemetry_csv(const std::vector<TelemetryRow>& rows);

struct ScenarioResult {
  std::vector<FrameRecord> records;
  std::vector<TelemetryRow> rows;
  LatencyReport latency;  // zeroed for an empty run
  double pose_pitch_max_deg = 0.0;
  double pose_pitch_min_deg = 0.0;
  double pose_roll_abs_max_deg = 0.0;
  double pose_yaw_abs_max_deg = 0.0;
  std::int64_t rate_limit_saturation_steps = 0;
  std::int64_t crash_events = 0;
  std::int64_t laps_completed = 0;
};

/// Run the full chain end to end: scripted driver on the nine-turn track,
/// pedal conditioning, vehicle, cueing, platform, under the configured
/// pipeline. Deterministic for identical config and seed.
ScenarioResult simulate_scenario(const RunConfig& cfg);

nlohmann::json metrics_to_json(const RunConfig& cfg, const ScenarioResult& result);

/// simulate_scenario plus file output: <out>/telemetry.csv, <out>/metrics.json.
ScenarioResult run_scenario(const RunConfig& cfg, const std::string& out_dir);

/// The same scenario under both pipelines: both latency reports side by side
/// plus per-frame mismatch histograms (keys are mismatch ms to 0.1 us).
nlohmann::json compare_pipelines(const RunConfig& cfg);

/// Segment list plus the centerline sampled at 1 m spacing (closed: the
/// final point repeats the first).
nlohmann::json export_track(const TrackParams& params);

}  // namespace cuesim
