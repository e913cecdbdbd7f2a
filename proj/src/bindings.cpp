#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "cuesim/config.hpp"
#include "cuesim/simulation.hpp"

namespace py = pybind11;
using namespace cuesim;

namespace {

RunConfig config_from_json_str(const std::string& text) {
  return parse_config(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic motion-cueing simulation core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::enum_<Gear>(m, "Gear")
      .value("DRIVE", Gear::Drive)
      .value("NEUTRAL", Gear::Neutral)
      .value("REVERSE", Gear::Reverse);

  py::enum_<RollSource>(m, "RollSource")
      .value("CENTRIPETAL", RollSource::Centripetal)
      .value("DIFFERENCED", RollSource::Differenced)
      .value("SUM", RollSource::Sum);

  py::enum_<PipelineMode>(m, "PipelineMode")
      .value("DEFAULT_FIXED_STEP", PipelineMode::DefaultFixedStep)
      .value("PHYSICS_ON_UPDATE", PipelineMode::PhysicsOnUpdate);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z);

  // Pedal conditioning
  py::class_<PedalFilterParams>(m, "PedalFilterParams")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("time_constant_s"), py::arg("step_s"))
      .def_readwrite("time_constant_s", &PedalFilterParams::time_constant_s)
      .def_readwrite("step_s", &PedalFilterParams::step_s)
      .def("alpha", &PedalFilterParams::alpha);

  py::class_<PedalFilterState>(m, "PedalFilterState")
      .def(py::init<>())
      .def_readwrite("last_output", &PedalFilterState::last_output);

  py::class_<DriverInput>(m, "DriverInput")
      .def(py::init<>())
      .def_readwrite("throttle", &DriverInput::throttle)
      .def_readwrite("brake", &DriverInput::brake)
      .def_readwrite("steering_deg", &DriverInput::steering_deg)
      .def_readwrite("gear", &DriverInput::gear);

  py::class_<ConditionedCommand>(m, "ConditionedCommand")
      .def(py::init<>())
      .def_readwrite("drive_demand", &ConditionedCommand::drive_demand)
      .def_readwrite("brake_demand", &ConditionedCommand::brake_demand)
      .def_readwrite("gear", &ConditionedCommand::gear);

  m.def(
      "low_pass_step",
      [](const PedalFilterState& state, double x, const PedalFilterParams& params) {
        const auto r = low_pass_step(state, x, params);
        return py::make_tuple(r.output, r.state);
      },
      py::arg("state"), py::arg("x"), py::arg("params"),
      "One filter step; returns (output, new_state)");

  m.def(
      "condition_pedals",
      [](const DriverInput& input, PedalFilterState throttle_state, PedalFilterState brake_state,
         const PedalFilterParams& throttle_params, const PedalFilterParams& brake_params,
         double idle_drive) {
        const auto cmd = condition_pedals(input, throttle_state, brake_state, throttle_params,
                                          brake_params, idle_drive);
        return py::make_tuple(cmd, throttle_state, brake_state);
      },
      py::arg("input"), py::arg("throttle_state"), py::arg("brake_state"),
      py::arg("throttle_params"), py::arg("brake_params"), py::arg("idle_drive"),
      "Returns (command, throttle_state, brake_state)");

  // Vehicle
  py::class_<VehicleState>(m, "VehicleState")
      .def(py::init<>())
      .def_readwrite("position_m", &VehicleState::position_m)
      .def_readwrite("velocity_mps", &VehicleState::velocity_mps)
      .def_readwrite("heading_rad", &VehicleState::heading_rad)
      .def_readwrite("yaw_rate_rps", &VehicleState::yaw_rate_rps)
      .def_readwrite("speed_mps", &VehicleState::speed_mps);

  py::class_<VehicleParams>(m, "VehicleParams")
      .def(py::init<>())
      .def_readwrite("wheelbase_m", &VehicleParams::wheelbase_m)
      .def_readwrite("max_drive_accel_mps2", &VehicleParams::max_drive_accel_mps2)
      .def_readwrite("max_brake_decel_mps2", &VehicleParams::max_brake_decel_mps2)
      .def_readwrite("drag_coefficient_per_m", &VehicleParams::drag_coefficient_per_m)
      .def_readwrite("max_steer_road_angle_deg", &VehicleParams::max_steer_road_angle_deg)
      .def_readwrite("reverse_speed_cap_mps", &VehicleParams::reverse_speed_cap_mps);

  py::class_<BodyAccel>(m, "BodyAccel")
      .def(py::init<>())
      .def_readwrite("longitudinal_mps2", &BodyAccel::longitudinal_mps2)
      .def_readwrite("lateral_mps2", &BodyAccel::lateral_mps2)
      .def_readwrite("vertical_mps2", &BodyAccel::vertical_mps2);

  py::class_<HapticCalibration>(m, "HapticCalibration")
      .def(py::init<>())
      .def_readwrite("freq_per_mps", &HapticCalibration::freq_per_mps)
      .def_readwrite("mag_per_mps", &HapticCalibration::mag_per_mps)
      .def_readwrite("freq_cap_hz", &HapticCalibration::freq_cap_hz);

  py::class_<HapticCue>(m, "HapticCue")
      .def_readonly("frequency_hz", &HapticCue::frequency_hz)
      .def_readonly("magnitude", &HapticCue::magnitude);

  m.def("step_vehicle", &step_vehicle, py::arg("state"), py::arg("cmd"), py::arg("steering_deg"),
        py::arg("params"), py::arg("dt_s"));
  m.def("accel_by_differencing", &accel_by_differencing, py::arg("v_prev_mps"),
        py::arg("v_curr_mps"), py::arg("heading_rad"), py::arg("dt_s"));
  m.def("centripetal_accel", &centripetal_accel, py::arg("speed_mps"), py::arg("yaw_rate_rps"));
  m.def("haptic_cue", &haptic_cue, py::arg("speed_mps"), py::arg("calibration"));

  // Cueing
  py::class_<CueGains>(m, "CueGains")
      .def(py::init<>())
      .def_readwrite("pitch_gain_deg_per_mps2", &CueGains::pitch_gain_deg_per_mps2)
      .def_readwrite("roll_gain_deg_per_mps2", &CueGains::roll_gain_deg_per_mps2)
      .def_readwrite("yaw_gain", &CueGains::yaw_gain);

  py::class_<CueingParams>(m, "CueingParams")
      .def(py::init<>())
      .def_readwrite("gains", &CueingParams::gains)
      .def_readwrite("hp_time_constant_s", &CueingParams::hp_time_constant_s)
      .def_readwrite("subthreshold_deg_per_s", &CueingParams::subthreshold_deg_per_s)
      .def_readwrite("roll_source", &CueingParams::roll_source);

  py::class_<HighPassState>(m, "HighPassState")
      .def(py::init<>())
      .def_readwrite("last_input", &HighPassState::last_input)
      .def_readwrite("last_output", &HighPassState::last_output);

  py::class_<YawWashoutState>(m, "YawWashoutState")
      .def(py::init<>())
      .def_readwrite("hp", &YawWashoutState::hp)
      .def_readwrite("yaw_cmd_deg", &YawWashoutState::yaw_cmd_deg);

  py::class_<TiltCue>(m, "TiltCue")
      .def_readonly("pitch_deg", &TiltCue::pitch_deg)
      .def_readonly("roll_deg", &TiltCue::roll_deg);

  py::class_<CueTarget>(m, "CueTarget")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("pitch_deg"), py::arg("roll_deg"),
           py::arg("yaw_deg"))
      .def_readwrite("pitch_deg", &CueTarget::pitch_deg)
      .def_readwrite("roll_deg", &CueTarget::roll_deg)
      .def_readwrite("yaw_deg", &CueTarget::yaw_deg);

  m.def(
      "high_pass_step",
      [](const HighPassState& state, double x, double tc, double dt) {
        const auto r = high_pass_step(state, x, tc, dt);
        return py::make_tuple(r.output, r.state);
      },
      py::arg("state"), py::arg("x"), py::arg("time_constant_s"), py::arg("dt_s"),
      "One filter step; returns (output, new_state)");

  m.def(
      "yaw_washout_step",
      [](const YawWashoutState& state, double yaw_rate, const CueingParams& params, double dt) {
        const auto r = yaw_washout_step(state, yaw_rate, params, dt);
        return py::make_tuple(r.yaw_cmd_deg, r.state);
      },
      py::arg("state"), py::arg("yaw_rate_rps"), py::arg("params"), py::arg("dt_s"),
      "One washout step; returns (yaw_cmd_deg, new_state)");

  m.def("tilt_cues", &tilt_cues, py::arg("accel"), py::arg("centripetal_mps2"), py::arg("gains"),
        py::arg("source") = RollSource::Centripetal);

  m.def(
      "compose_cue_frame",
      [](const BodyAccel& accel, double speed, double yaw_rate, CueingState state,
         const CueingParams& params, double dt) {
        const auto cue = compose_cue_frame(accel, speed, yaw_rate, state, params, dt);
        return py::make_tuple(cue, state);
      },
      py::arg("accel"), py::arg("speed_mps"), py::arg("yaw_rate_rps"), py::arg("state"),
      py::arg("params"), py::arg("dt_s"), "Returns (cue_target, new_state)");

  py::class_<CueingState>(m, "CueingState")
      .def(py::init<>())
      .def_readwrite("yaw", &CueingState::yaw);

  // Platform
  py::class_<PlatformLimits>(m, "PlatformLimits")
      .def(py::init<>())
      .def_readwrite("pitch_min_deg", &PlatformLimits::pitch_min_deg)
      .def_readwrite("pitch_max_deg", &PlatformLimits::pitch_max_deg)
      .def_readwrite("roll_limit_deg", &PlatformLimits::roll_limit_deg)
      .def_readwrite("yaw_limit_deg", &PlatformLimits::yaw_limit_deg)
      .def_readwrite("motor_limit_deg", &PlatformLimits::motor_limit_deg)
      .def_readwrite("motor_rate_deg_per_s", &PlatformLimits::motor_rate_deg_per_s);

  py::class_<PlatformPose>(m, "PlatformPose")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("pitch_deg"), py::arg("roll_deg"),
           py::arg("yaw_deg"))
      .def_readwrite("pitch_deg", &PlatformPose::pitch_deg)
      .def_readwrite("roll_deg", &PlatformPose::roll_deg)
      .def_readwrite("yaw_deg", &PlatformPose::yaw_deg);

  py::class_<MotorAngles>(m, "MotorAngles")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("front_left_deg"),
           py::arg("front_right_deg"), py::arg("rear_deg"))
      .def_readwrite("front_left_deg", &MotorAngles::front_left_deg)
      .def_readwrite("front_right_deg", &MotorAngles::front_right_deg)
      .def_readwrite("rear_deg", &MotorAngles::rear_deg);

  py::class_<ServoParams>(m, "ServoParams")
      .def(py::init<>())
      .def_readwrite("dead_zone_deg", &ServoParams::dead_zone_deg)
      .def_readwrite("clip_deg", &ServoParams::clip_deg)
      .def_readwrite("smoothing_time_constant_s", &ServoParams::smoothing_time_constant_s)
      .def_readwrite("power_usage", &ServoParams::power_usage);

  py::class_<ServoState>(m, "ServoState").def(py::init<>());

  m.def("clamp_pose", &clamp_pose, py::arg("pose"), py::arg("limits"));
  m.def("inverse_kinematics", &inverse_kinematics, py::arg("pose"), py::arg("limits"));
  m.def("forward_kinematics", &forward_kinematics, py::arg("motors"), py::arg("limits"));
  m.def("rate_limit_step", &rate_limit_step, py::arg("prev"), py::arg("target"), py::arg("dt_s"),
        py::arg("limits"));
  m.def(
      "apply_servo_shaping",
      [](const MotorAngles& cmd, ServoState state, const ServoParams& params, double dt) {
        const auto out = apply_servo_shaping(cmd, state, params, dt);
        return py::make_tuple(out, state);
      },
      py::arg("cmd"), py::arg("state"), py::arg("params"), py::arg("dt_s"),
      "Returns (shaped, new_state)");

  // Scheduler
  py::class_<SchedulerConfig>(m, "SchedulerConfig")
      .def(py::init<>())
      .def_readwrite("display_hz", &SchedulerConfig::display_hz)
      .def_readwrite("fixed_step_s", &SchedulerConfig::fixed_step_s)
      .def_readwrite("mode", &SchedulerConfig::mode)
      .def_readwrite("frame_buffers", &SchedulerConfig::frame_buffers)
      .def_readwrite("vsync", &SchedulerConfig::vsync);

  py::class_<FrameRecord>(m, "FrameRecord")
      .def_readonly("frame_index", &FrameRecord::frame_index)
      .def_readonly("input_sample_time_s", &FrameRecord::input_sample_time_s)
      .def_readonly("physics_time_for_render_s", &FrameRecord::physics_time_for_render_s)
      .def_readonly("physics_time_for_platform_s", &FrameRecord::physics_time_for_platform_s)
      .def_readonly("present_time_s", &FrameRecord::present_time_s)
      .def_readonly("physics_steps", &FrameRecord::physics_steps)
      .def_readonly("dropped_frames", &FrameRecord::dropped_frames);

  py::class_<LatencyReport>(m, "LatencyReport")
      .def_readonly("frames", &LatencyReport::frames)
      .def_readonly("mean_input_latency_ms", &LatencyReport::mean_input_latency_ms)
      .def_readonly("max_input_latency_ms", &LatencyReport::max_input_latency_ms)
      .def_readonly("mean_mismatch_ms", &LatencyReport::mean_mismatch_ms)
      .def_readonly("max_mismatch_ms", &LatencyReport::max_mismatch_ms)
      .def_readonly("nonzero_mismatch_fraction", &LatencyReport::nonzero_mismatch_fraction)
      .def_readonly("mean_render_age_ms", &LatencyReport::mean_render_age_ms)
      .def_readonly("max_render_age_ms", &LatencyReport::max_render_age_ms)
      .def_readonly("dropped_frames", &LatencyReport::dropped_frames);

  m.def(
      "fixed_update_steps",
      [](double acc, double frame_dt, double fixed_step) {
        const auto r = fixed_update_steps(acc, frame_dt, fixed_step);
        return py::make_tuple(r.steps, r.accumulator_s);
      },
      py::arg("accumulator_s"), py::arg("frame_dt_s"), py::arg("fixed_step_s"),
      "Returns (steps, accumulator)");

  m.def("constant_trace", &constant_trace, py::arg("frames"), py::arg("compute_s"));
  m.def("jittered_trace", &jittered_trace, py::arg("frames"), py::arg("base_s"),
        py::arg("amplitude_s"), py::arg("seed"));

  m.def(
      "run_pipeline",
      [](const SchedulerConfig& cfg, const std::vector<double>& trace, py::object sim_step) {
        SimStepFn fn;
        if (!sim_step.is_none()) {
          fn = [sim_step](double t, double dt) { sim_step(t, dt); };
        } else {
          fn = [](double, double) {};
        }
        return run_pipeline(cfg, trace, fn);
      },
      py::arg("cfg"), py::arg("trace"), py::arg("sim_step") = py::none());

  m.def(
      "latency_report",
      [](const std::vector<FrameRecord>& records) { return latency_report(records); },
      py::arg("records"));

  // Track
  py::class_<TrackParams>(m, "TrackParams")
      .def(py::init<>())
      .def_readwrite("straight_length_m", &TrackParams::straight_length_m)
      .def_readwrite("grade_magnitude", &TrackParams::grade_magnitude)
      .def_readwrite("lane_width_m", &TrackParams::lane_width_m)
      .def_readwrite("lane_count", &TrackParams::lane_count)
      .def_readwrite("arc_radius_m", &TrackParams::arc_radius_m)
      .def_readwrite("shuffle_seed", &TrackParams::shuffle_seed);

  py::class_<Track>(m, "Track")
      .def_readonly("lap_length_m", &Track::lap_length_m)
      .def_readonly("lane_width_m", &Track::lane_width_m)
      .def_readonly("lane_count", &Track::lane_count)
      .def("road_half_width_m", &Track::road_half_width_m)
      .def("left_lane_offset_m", &Track::left_lane_offset_m)
      .def("__len__", [](const Track& t) { return t.segments.size(); });

  py::class_<TrackSample>(m, "TrackSample")
      .def_readonly("position_m", &TrackSample::position_m)
      .def_readonly("heading_rad", &TrackSample::heading_rad)
      .def_readonly("grade", &TrackSample::grade);

  m.def("build_track", &build_track, py::arg("params"));
  m.def("sample_track", &sample_track, py::arg("track"), py::arg("arclength_m"));

  // End-to-end runs, configured by a JSON document (same schema as the CLI).
  m.def(
      "run_scenario",
      [](const std::string& config_json, const std::string& out_dir) {
        const RunConfig cfg = config_from_json_str(config_json);
        const ScenarioResult result = run_scenario(cfg, out_dir);
        return py::make_tuple(static_cast<std::int64_t>(result.rows.size()),
                              result.laps_completed, result.crash_events);
      },
      py::arg("config_json"), py::arg("out_dir"),
      "Run a scenario, write telemetry.csv and metrics.json; returns "
      "(frames, laps, crashes)");

  m.def(
      "compare_pipelines",
      [](const std::string& config_json) {
        return compare_pipelines(config_from_json_str(config_json)).dump();
      },
      py::arg("config_json"), "Returns the comparison document as a JSON string");

  m.def(
      "export_track",
      [](const TrackParams& params) { return export_track(params).dump(); },
      py::arg("params"), "Returns the track geometry as a JSON string");

  m.def("default_config", []() { return config_to_json(RunConfig{}).dump(2); });

  m.attr("TELEMETRY_SCHEMA_VERSION") = kTelemetrySchemaVersion;
}
