#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cuesim/types.hpp"

namespace cuesim {

/// The two execution pipelines.
///
/// DefaultFixedStep: physics advances inside a fixed-timestep accumulator
/// (zero or more steps per rendered frame), so the state age at presentation
/// varies frame to frame and the vestibular stream advances in fixed-step
/// jumps while the display advances one period per frame.
///
/// PhysicsOnUpdate: physics advances exactly once at the start of every
/// frame by the elapsed frame duration, so each frame carries the freshest
/// state and the display and platform streams advance in lockstep.
enum class PipelineMode { DefaultFixedStep, PhysicsOnUpdate };

const char* to_string(PipelineMode m);

struct SchedulerConfig {
  double display_hz = 90.0;
  double fixed_step_s = 0.02;
  PipelineMode mode = PipelineMode::PhysicsOnUpdate;
  int frame_buffers = 1;
  bool vsync = true;

  void validate() const;
  double display_period_s() const { return 1.0 / display_hz; }
};

/// Per-frame provenance record.
///
/// physics_time_for_render_s is the sim-time of the state rendered into the
/// frame. physics_time_for_platform_s is the state the platform expresses
/// while this frame is on screen, re-referenced by the display's own advance
/// so that a pipeline whose physics progression matches the display cadence
/// reads identical render/platform provenance. Their difference is the
/// residual, time-varying visuo-vestibular offset; the constant pipeline
/// latency is reported separately as input latency.
struct FrameRecord {
  std::int64_t frame_index = 0;
  double input_sample_time_s = 0.0;
  double physics_time_for_render_s = 0.0;
  double physics_time_for_platform_s = 0.0;
  double present_time_s = 0.0;
  int physics_steps = 0;
  int dropped_frames = 0;  // display periods missed because compute overran
};

struct FixedStepResult {
  int steps = 0;
  double accumulator_s = 0.0;
};

/// Accumulator update for the fixed-timestep loop: add the elapsed frame
/// time, run floor(accumulator / fixed_step) physics steps, keep the
/// remainder. Zero steps models the skipped frame.
FixedStepResult fixed_update_steps(double accumulator_s, double frame_dt_s, double fixed_step_s);

/// Synthetic per-frame compute durations.
std::vector<double> constant_trace(std::size_t frames, double compute_s);
std::vector<double> jittered_trace(std::size_t frames, double base_s, double amplitude_s,
                                   std::uint64_t seed);

/// Called once per physics step with the new state time and the step size.
using SimStepFn = std::function<void(double state_time_s, double dt_s)>;
/// Called once per frame after its physics; return false to stop the run.
using FrameFn = std::function<bool(const FrameRecord&)>;

/// Run one pipeline over a compute-duration trace. Purely simulated time: no
/// sleeping, deterministic for identical inputs. With vsync, presentation is
/// quantized to the display grid and compute overruns flag dropped frames.
std::vector<FrameRecord> run_pipeline(const SchedulerConfig& cfg,
                                      std::span<const double> frame_compute_s,
                                      const SimStepFn& sim_step, const FrameFn& on_frame = {});

struct LatencyReport {
  std::int64_t frames = 0;
  double mean_input_latency_ms = 0.0;
  double max_input_latency_ms = 0.0;
  double mean_mismatch_ms = 0.0;
  double max_mismatch_ms = 0.0;
  double nonzero_mismatch_fraction = 0.0;  // frames with mismatch > 1 ns
  double mean_render_age_ms = 0.0;         // present_time - render provenance
  double max_render_age_ms = 0.0;
  std::int64_t dropped_frames = 0;
};

/// Aggregate a record sequence. Mismatch per frame is
/// |physics_time_for_render - physics_time_for_platform|.
LatencyReport latency_report(std::span<const FrameRecord> records);

double frame_mismatch_ms(const FrameRecord& r);
double frame_input_latency_ms(const FrameRecord& r);

}  // namespace cuesim
