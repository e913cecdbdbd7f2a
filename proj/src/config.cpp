#include "cuesim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace cuesim {

namespace {

using nlohmann::json;

/// Section reader that tracks which keys were consumed and rejects leftovers.
class SectionReader {
 public:
  SectionReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), path_ + ": must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T* out) {
    if (!has(key)) return;
    try {
      *out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ValidationError(path_ + "." + key + ": wrong type");
    }
  }

  void read_finite(const std::string& key, double* out) {
    read(key, out);
    require(std::isfinite(*out), path_ + "." + key + ": must be finite");
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) throw ValidationError(path_ + "." + key + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_input(const json& j, InputConfig* out) {
  SectionReader r(j, "input");
  r.read_finite("time_constant_s", &out->time_constant_s);
  r.read_finite("idle_drive", &out->idle_drive);
  bool brake_set = false;
  if (r.has("brake_time_constant_s")) {
    r.read("brake_time_constant_s", &out->brake_time_constant_s);
    brake_set = true;
  }
  if (!brake_set) out->brake_time_constant_s = out->time_constant_s;
  r.finish();
  require(out->time_constant_s > 0.0, "input.time_constant_s: must be > 0");
  require(out->brake_time_constant_s > 0.0, "input.brake_time_constant_s: must be > 0");
  require(out->idle_drive >= 0.0, "input.idle_drive: must be >= 0");
}

void parse_vehicle(const json& j, VehicleParams* v, HapticCalibration* h) {
  SectionReader r(j, "vehicle");
  r.read_finite("wheelbase_m", &v->wheelbase_m);
  r.read_finite("max_drive_accel_mps2", &v->max_drive_accel_mps2);
  r.read_finite("max_brake_decel_mps2", &v->max_brake_decel_mps2);
  r.read_finite("drag_coefficient_per_m", &v->drag_coefficient_per_m);
  r.read_finite("max_steer_road_angle_deg", &v->max_steer_road_angle_deg);
  r.read_finite("reverse_speed_cap_mps", &v->reverse_speed_cap_mps);
  if (const json* hj = r.child("haptic")) {
    SectionReader hr(*hj, "vehicle.haptic");
    hr.read_finite("freq_per_mps", &h->freq_per_mps);
    hr.read_finite("mag_per_mps", &h->mag_per_mps);
    hr.read_finite("freq_cap_hz", &h->freq_cap_hz);
    hr.finish();
  }
  r.finish();
  v->validate();
  h->validate();
}

RollSource parse_roll_source(const std::string& s) {
  if (s == "centripetal") return RollSource::Centripetal;
  if (s == "differenced") return RollSource::Differenced;
  if (s == "sum") return RollSource::Sum;
  throw ValidationError("cueing.roll_source: must be centripetal, differenced, or sum");
}

void parse_cueing(const json& j, CueingParams* out) {
  SectionReader r(j, "cueing");
  r.read_finite("pitch_gain", &out->gains.pitch_gain_deg_per_mps2);
  r.read_finite("roll_gain", &out->gains.roll_gain_deg_per_mps2);
  r.read_finite("yaw_gain", &out->gains.yaw_gain);
  r.read_finite("hp_time_constant_s", &out->hp_time_constant_s);
  r.read_finite("subthreshold_deg_s", &out->subthreshold_deg_per_s);
  if (r.has("roll_source")) {
    std::string s;
    r.read("roll_source", &s);
    out->roll_source = parse_roll_source(s);
  }
  r.finish();
  out->validate();
}

void parse_platform(const json& j, PlatformLimits* limits, ServoParams* servo) {
  SectionReader r(j, "platform");
  r.read_finite("pitch_min_deg", &limits->pitch_min_deg);
  r.read_finite("pitch_max_deg", &limits->pitch_max_deg);
  r.read_finite("roll_limit_deg", &limits->roll_limit_deg);
  r.read_finite("yaw_limit_deg", &limits->yaw_limit_deg);
  r.read_finite("motor_limit_deg", &limits->motor_limit_deg);
  r.read_finite("motor_rate_deg_s", &limits->motor_rate_deg_per_s);
  if (const json* sj = r.child("servo")) {
    SectionReader sr(*sj, "platform.servo");
    sr.read_finite("dead_zone_deg", &servo->dead_zone_deg);
    sr.read_finite("clip_deg", &servo->clip_deg);
    sr.read_finite("smoothing_time_constant_s", &servo->smoothing_time_constant_s);
    sr.read_finite("power_usage", &servo->power_usage);
    sr.finish();
  }
  r.finish();
  limits->validate();
  servo->validate(*limits);
}

void parse_scheduler(const json& j, SchedulerConfig* sched, TraceConfig* trace) {
  SectionReader r(j, "scheduler");
  r.read_finite("display_hz", &sched->display_hz);
  r.read_finite("fixed_step_s", &sched->fixed_step_s);
  if (r.has("mode")) {
    std::string m;
    r.read("mode", &m);
    if (m == "default_fixed_step") {
      sched->mode = PipelineMode::DefaultFixedStep;
    } else if (m == "physics_on_update") {
      sched->mode = PipelineMode::PhysicsOnUpdate;
    } else {
      throw ValidationError("scheduler.mode: must be default_fixed_step or physics_on_update");
    }
  }
  r.read("frame_buffers", &sched->frame_buffers);
  r.read("vsync", &sched->vsync);
  if (const json* tj = r.child("trace")) {
    SectionReader tr(*tj, "scheduler.trace");
    if (tr.has("kind")) {
      std::string k;
      tr.read("kind", &k);
      if (k == "constant") {
        trace->kind = TraceConfig::Kind::Constant;
      } else if (k == "jitter") {
        trace->kind = TraceConfig::Kind::Jitter;
      } else if (k == "explicit") {
        trace->kind = TraceConfig::Kind::Explicit;
      } else {
        throw ValidationError("scheduler.trace.kind: must be constant, jitter, or explicit");
      }
    }
    tr.read_finite("compute_s", &trace->compute_s);
    tr.read_finite("jitter_amplitude_s", &trace->jitter_amplitude_s);
    tr.read("values", &trace->values);
    tr.finish();
  }
  r.finish();
  sched->validate();
  require(trace->compute_s > 0.0, "scheduler.trace.compute_s: must be > 0");
  require(trace->jitter_amplitude_s >= 0.0, "scheduler.trace.jitter_amplitude_s: must be >= 0");
  if (trace->kind == TraceConfig::Kind::Explicit) {
    require(!trace->values.empty(), "scheduler.trace.values: required for an explicit trace");
    for (double v : trace->values)
      require(v > 0.0, "scheduler.trace.values: entries must be > 0");
  }
}

void parse_track(const json& j, TrackParams* out) {
  SectionReader r(j, "track");
  r.read_finite("straight_length_m", &out->straight_length_m);
  r.read_finite("grade_magnitude", &out->grade_magnitude);
  r.read_finite("lane_width_m", &out->lane_width_m);
  r.read("lane_count", &out->lane_count);
  r.read_finite("arc_radius_m", &out->arc_radius_m);
  if (r.has("shuffle_seed")) {
    std::uint64_t seed = 0;
    r.read("shuffle_seed", &seed);
    out->shuffle_seed = seed;
  }
  r.finish();
  out->validate();
}

void parse_driver(const json& j, DriverScriptParams* out) {
  SectionReader r(j, "driver");
  r.read_finite("target_speed_mps", &out->target_speed_mps);
  r.read_finite("lookahead_m", &out->lookahead_m);
  r.read_finite("speed_gain", &out->speed_gain);
  r.finish();
  out->validate();
}

void parse_run(const json& j, RunSection* out) {
  SectionReader r(j, "run");
  r.read("duration_s", &out->duration_s);
  r.read("seed", &out->seed);
  r.read("output_dir", &out->output_dir);
  r.finish();
  require(std::isfinite(out->duration_s) && out->duration_s >= 0.0,
          "run.duration_s: must be >= 0");
}

}  // namespace

void RunConfig::validate() const {
  require(input.time_constant_s > 0.0, "input.time_constant_s: must be > 0");
  require(input.brake_time_constant_s > 0.0, "input.brake_time_constant_s: must be > 0");
  require(input.idle_drive >= 0.0, "input.idle_drive: must be >= 0");
  vehicle.validate();
  haptic.validate();
  cueing.validate();
  platform.validate();
  servo.validate(platform);
  scheduler.validate();
  track.validate();
  driver.validate();
  require(run.duration_s >= 0.0, "run.duration_s: must be >= 0");
}

RunConfig parse_config(const json& doc) {
  require(doc.is_object(), "config: root must be an object");
  RunConfig cfg;
  std::set<std::string> seen;
  auto section = [&](const std::string& name) -> const json* {
    seen.insert(name);
    return doc.contains(name) ? &doc.at(name) : nullptr;
  };

  if (const json* j = section("input")) parse_input(*j, &cfg.input);
  if (const json* j = section("vehicle")) parse_vehicle(*j, &cfg.vehicle, &cfg.haptic);
  if (const json* j = section("cueing")) parse_cueing(*j, &cfg.cueing);
  if (const json* j = section("platform")) parse_platform(*j, &cfg.platform, &cfg.servo);
  if (const json* j = section("scheduler")) parse_scheduler(*j, &cfg.scheduler, &cfg.trace);
  if (const json* j = section("track")) parse_track(*j, &cfg.track);
  if (const json* j = section("driver")) parse_driver(*j, &cfg.driver);
  if (const json* j = section("run")) parse_run(*j, &cfg.run);

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!seen.count(key)) throw ValidationError(key + ": unknown section");
  }

  // The scripted driver steers with the configured vehicle's geometry.
  cfg.driver.wheelbase_m = cfg.vehicle.wheelbase_m;
  cfg.driver.max_steer_road_angle_deg = cfg.vehicle.max_steer_road_angle_deg;
  cfg.driver.drag_coefficient_per_m = cfg.vehicle.drag_coefficient_per_m;
  cfg.driver.max_drive_accel_mps2 = cfg.vehicle.max_drive_accel_mps2;

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["input"] = {{"time_constant_s", cfg.input.time_constant_s},
                {"idle_drive", cfg.input.idle_drive},
                {"brake_time_constant_s", cfg.input.brake_time_constant_s}};
  j["vehicle"] = {{"wheelbase_m", cfg.vehicle.wheelbase_m},
                  {"max_drive_accel_mps2", cfg.vehicle.max_drive_accel_mps2},
                  {"max_brake_decel_mps2", cfg.vehicle.max_brake_decel_mps2},
                  {"drag_coefficient_per_m", cfg.vehicle.drag_coefficient_per_m},
                  {"max_steer_road_angle_deg", cfg.vehicle.max_steer_road_angle_deg},
                  {"reverse_speed_cap_mps", cfg.vehicle.reverse_speed_cap_mps},
                  {"haptic",
                   {{"freq_per_mps", cfg.haptic.freq_per_mps},
                    {"mag_per_mps", cfg.haptic.mag_per_mps},
                    {"freq_cap_hz", cfg.haptic.freq_cap_hz}}}};
  j["cueing"] = {{"pitch_gain", cfg.cueing.gains.pitch_gain_deg_per_mps2},
                 {"roll_gain", cfg.cueing.gains.roll_gain_deg_per_mps2},
                 {"yaw_gain", cfg.cueing.gains.yaw_gain},
                 {"hp_time_constant_s", cfg.cueing.hp_time_constant_s},
                 {"subthreshold_deg_s", cfg.cueing.subthreshold_deg_per_s},
                 {"roll_source", to_string(cfg.cueing.roll_source)}};
  j["platform"] = {{"pitch_min_deg", cfg.platform.pitch_min_deg},
                   {"pitch_max_deg", cfg.platform.pitch_max_deg},
                   {"roll_limit_deg", cfg.platform.roll_limit_deg},
                   {"yaw_limit_deg", cfg.platform.yaw_limit_deg},
                   {"motor_limit_deg", cfg.platform.motor_limit_deg},
                   {"motor_rate_deg_s", cfg.platform.motor_rate_deg_per_s},
                   {"servo",
                    {{"dead_zone_deg", cfg.servo.dead_zone_deg},
                     {"clip_deg", cfg.servo.clip_deg},
                     {"smoothing_time_constant_s", cfg.servo.smoothing_time_constant_s},
                     {"power_usage", cfg.servo.power_usage}}}};
  json trace = {{"compute_s", cfg.trace.compute_s},
                {"jitter_amplitude_s", cfg.trace.jitter_amplitude_s}};
  switch (cfg.trace.kind) {
    case TraceConfig::Kind::Constant: trace["kind"] = "constant"; break;
    case TraceConfig::Kind::Jitter: trace["kind"] = "jitter"; break;
    case TraceConfig::Kind::Explicit:
      trace["kind"] = "explicit";
      trace["values"] = cfg.trace.values;
      break;
  }
  j["scheduler"] = {{"display_hz", cfg.scheduler.display_hz},
                    {"fixed_step_s", cfg.scheduler.fixed_step_s},
                    {"mode", to_string(cfg.scheduler.mode)},
                    {"frame_buffers", cfg.scheduler.frame_buffers},
                    {"vsync", cfg.scheduler.vsync},
                    {"trace", trace}};
  j["track"] = {{"straight_length_m", cfg.track.straight_length_m},
                {"grade_magnitude", cfg.track.grade_magnitude},
                {"lane_width_m", cfg.track.lane_width_m},
                {"lane_count", cfg.track.lane_count},
                {"arc_radius_m", cfg.track.arc_radius_m}};
  if (cfg.track.shuffle_seed) j["track"]["shuffle_seed"] = *cfg.track.shuffle_seed;
  j["driver"] = {{"target_speed_mps", cfg.driver.target_speed_mps},
                 {"lookahead_m", cfg.driver.lookahead_m},
                 {"speed_gain", cfg.driver.speed_gain}};
  j["run"] = {{"duration_s", cfg.run.duration_s},
              {"seed", cfg.run.seed},
              {"output_dir", cfg.run.output_dir}};
  return j;
}

std::vector<double> make_trace(const RunConfig& cfg) {
  const auto frames =
      static_cast<std::size_t>(std::llround(cfg.run.duration_s * cfg.scheduler.display_hz));
  switch (cfg.trace.kind) {
    case TraceConfig::Kind::Constant:
      return constant_trace(frames, cfg.trace.compute_s);
    case TraceConfig::Kind::Jitter:
      return jittered_trace(frames, cfg.trace.compute_s, cfg.trace.jitter_amplitude_s,
                            cfg.run.seed);
    case TraceConfig::Kind::Explicit: {
      std::vector<double> out(frames);
      for (std::size_t i = 0; i < frames; ++i) out[i] = cfg.trace.values[i % cfg.trace.values.size()];
      return out;
    }
  }
  return {};
}

}  // namespace cuesim
