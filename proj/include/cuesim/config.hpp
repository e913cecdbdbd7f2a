#pragma once

#include <cstdint>
#include <string>

#include "cuesim/frame_scheduler.hpp"
#include "cuesim/input_conditioning.hpp"
#include "cuesim/motion_cueing.hpp"
#include "cuesim/platform_model.hpp"
#include "cuesim/scenario_track.hpp"
#include "cuesim/vehicle_dynamics.hpp"

#include <nlohmann/json_fwd.hpp>

namespace cuesim {

struct InputConfig {
  double time_constant_s = 0.2;
  double idle_drive = 0.05;
  double brake_time_constant_s = 0.2;  // defaults to the throttle time constant
};

/// Synthetic per-frame compute durations: a constant, a seeded uniform
/// jitter around a base, or an explicit list.
struct TraceConfig {
  enum class Kind { Constant, Jitter, Explicit };
  Kind kind = Kind::Constant;
  double compute_s = 0.006;
  double jitter_amplitude_s = 0.002;
  std::vector<double> values;
};

struct RunSection {
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

/// Full run configuration. JSON sections: input, vehicle, cueing, platform,
/// scheduler, track, driver, run. Unknown keys are rejected with their path.
struct RunConfig {
  InputConfig input;
  VehicleParams vehicle;
  HapticCalibration haptic;
  CueingParams cueing;
  PlatformLimits platform;
  ServoParams servo;
  SchedulerConfig scheduler;
  TraceConfig trace;
  TrackParams track;
  DriverScriptParams driver;
  RunSection run;

  void validate() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& cfg);

/// Materialize the trace for a run: one entry per display frame of the
/// configured duration.
std::vector<double> make_trace(const RunConfig& cfg);

}  // namespace cuesim
