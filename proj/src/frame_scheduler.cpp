#include "cuesim/frame_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cuesim {

const char* to_string(PipelineMode m) {
  switch (m) {
    case PipelineMode::DefaultFixedStep: return "default_fixed_step";
    case PipelineMode::PhysicsOnUpdate: return "physics_on_update";
  }
  return "?";
}

void SchedulerConfig::validate() const {
  require(display_hz > 0.0 && std::isfinite(display_hz), "scheduler.display_hz: must be > 0");
  require(fixed_step_s > 0.0 && std::isfinite(fixed_step_s),
          "scheduler.fixed_step_s: must be > 0");
  require(frame_buffers >= 0, "scheduler.frame_buffers: must be >= 0");
}

FixedStepResult fixed_update_steps(double accumulator_s, double frame_dt_s, double fixed_step_s) {
  require(frame_dt_s > 0.0, "fixed_update_steps: frame_dt must be > 0");
  require(fixed_step_s > 0.0, "fixed_update_steps: fixed_step must be > 0");
  double acc = accumulator_s + frame_dt_s;
  const int steps = static_cast<int>(std::floor(acc / fixed_step_s));
  acc -= steps * fixed_step_s;
  return {steps, acc};
}

std::vector<double> constant_trace(std::size_t frames, double compute_s) {
  require(compute_s > 0.0, "trace: compute duration must be > 0");
  return std::vector<double>(frames, compute_s);
}

std::vector<double> jittered_trace(std::size_t frames, double base_s, double amplitude_s,
                                   std::uint64_t seed) {
  require(base_s > 0.0, "trace: base duration must be > 0");
  require(amplitude_s >= 0.0 && amplitude_s < base_s, "trace: jitter amplitude must be in [0, base)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude_s, amplitude_s);
  std::vector<double> out(frames);
  for (auto& v : out) v = base_s + dist(rng);
  return out;
}

std::vector<FrameRecord> run_pipeline(const SchedulerConfig& cfg,
                                      std::span<const double> frame_compute_s,
                                      const SimStepFn& sim_step, const FrameFn& on_frame) {
  cfg.validate();
  require(!frame_compute_s.empty(), "run_pipeline: trace must be nonempty");
  for (double c : frame_compute_s) require(c > 0.0, "run_pipeline: trace entries must be > 0");

  const double period = cfg.display_period_s();

  std::vector<FrameRecord> records;
  records.reserve(frame_compute_s.size());

  double frame_start = 0.0;
  double frame_dt = 0.0;  // duration of the interval that just elapsed
  double accumulator = 0.0;
  double physics_time = 0.0;  // sim-time of the newest completed physics state
  int prev_dropped = 0;

  for (std::size_t k = 0; k < frame_compute_s.size(); ++k) {
    const double compute = frame_compute_s[k];

    FrameRecord rec;
    rec.frame_index = static_cast<std::int64_t>(k);
    rec.input_sample_time_s = frame_start;

    // The first frame starts from the initial state; nothing has elapsed yet.
    double physics_advance = 0.0;
    if (k > 0) {
      if (cfg.mode == PipelineMode::PhysicsOnUpdate) {
        physics_advance = frame_dt;
        physics_time += frame_dt;
        sim_step(physics_time, frame_dt);
        rec.physics_steps = 1;
      } else {
        const auto fu = fixed_update_steps(accumulator, frame_dt, cfg.fixed_step_s);
        accumulator = fu.accumulator_s;
        for (int s = 0; s < fu.steps; ++s) {
          physics_time += cfg.fixed_step_s;
          sim_step(physics_time, cfg.fixed_step_s);
        }
        rec.physics_steps = fu.steps;
        physics_advance = fu.steps * cfg.fixed_step_s;
      }
    }
    rec.physics_time_for_render_s = physics_time;

    double next_step;
    if (cfg.vsync) {
      rec.dropped_frames = std::max(0, static_cast<int>(std::ceil(compute / period)) - 1);
      rec.present_time_s = frame_start + (cfg.frame_buffers + rec.dropped_frames) * period;
      next_step = (1 + rec.dropped_frames) * period;
    } else {
      rec.present_time_s = frame_start + compute;
      next_step = compute;
    }

    // Platform provenance: render provenance minus the gap between the
    // physics advance and the display advance over the last interval. A
    // pipeline whose physics advances one display period per frame reads
    // equal render/platform times; the fixed-step staircase does not.
    if (k == 0) {
      rec.physics_time_for_platform_s = rec.physics_time_for_render_s;
    } else {
      const double display_advance = frame_dt + (rec.dropped_frames - prev_dropped) * period;
      rec.physics_time_for_platform_s =
          rec.physics_time_for_render_s - (physics_advance - display_advance);
    }
    prev_dropped = rec.dropped_frames;

    records.push_back(rec);
    if (on_frame && !on_frame(rec)) break;
    frame_dt = next_step;
    frame_start += next_step;
  }
  return records;
}

double frame_mismatch_ms(const FrameRecord& r) {
  return std::abs(r.physics_time_for_render_s - r.physics_time_for_platform_s) * 1000.0;
}

double frame_input_latency_ms(const FrameRecord& r) {
  return (r.present_time_s - r.input_sample_time_s) * 1000.0;
}

LatencyReport latency_report(std::span<const FrameRecord> records) {
  require(!records.empty(), "latency_report: records must be nonempty");
  LatencyReport rep;
  rep.frames = static_cast<std::int64_t>(records.size());
  double sum_latency = 0.0, sum_mismatch = 0.0, sum_age = 0.0;
  std::int64_t nonzero = 0;
  for (const auto& r : records) {
    const double latency = frame_input_latency_ms(r);
    const double mismatch = frame_mismatch_ms(r);
    const double age = (r.present_time_s - r.physics_time_for_render_s) * 1000.0;
    sum_latency += latency;
    sum_mismatch += mismatch;
    sum_age += age;
    rep.max_input_latency_ms = std::max(rep.max_input_latency_ms, latency);
    rep.max_mismatch_ms = std::max(rep.max_mismatch_ms, mismatch);
    rep.max_render_age_ms = std::max(rep.max_render_age_ms, age);
    if (mismatch > 1e-6) ++nonzero;  // > 1 ns
    rep.dropped_frames += r.dropped_frames;
  }
  const double n = static_cast<double>(records.size());
  rep.mean_input_latency_ms = sum_latency / n;
  rep.mean_mismatch_ms = sum_mismatch / n;
  rep.mean_render_age_ms = sum_age / n;
  rep.nonzero_mismatch_fraction = static_cast<double>(nonzero) / n;
  return rep;
}

}  // namespace cuesim
