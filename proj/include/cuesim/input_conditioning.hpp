#pragma once

#include "cuesim/types.hpp"

namespace cuesim {

enum class Gear { Drive, Neutral, Reverse };

const char* to_string(Gear g);

/// Discrete first-order low-pass: y' = y + alpha * (x - y) with
/// alpha = step / (time_constant + step). Backward-Euler form, DC gain 1.
struct PedalFilterParams {
  double time_constant_s = 0.2;
  double step_s = 1.0 / 90.0;  // simulation frame period

  double alpha() const { return step_s / (time_constant_s + step_s); }
  void validate() const;
};

struct PedalFilterState {
  double last_output = 0.0;
};

/// One raw pedal/steering/gear sample at a frame.
struct DriverInput {
  double throttle = 0.0;      // [0, 1]
  double brake = 0.0;         // [0, 1]
  double steering_deg = 0.0;  // wheel angle, [-450, 450]
  Gear gear = Gear::Neutral;

  void validate() const;
};

/// Pre-physics demand after pedal filtering. Carries the gear through so the
/// vehicle step knows the drive direction.
struct ConditionedCommand {
  double drive_demand = 0.0;  // filtered throttle + idle term in Drive, >= 0
  double brake_demand = 0.0;  // filtered brake, [0, 1]
  Gear gear = Gear::Neutral;
};

struct LowPassResult {
  double output = 0.0;
  PedalFilterState state;
};

/// Advance the filter one step. Rejects non-finite input.
LowPassResult low_pass_step(PedalFilterState state, double x, const PedalFilterParams& params);

/// Filter throttle and brake one step each and add the constant idle
/// acceleration while the shift is in Drive.
ConditionedCommand condition_pedals(const DriverInput& input, PedalFilterState& throttle_state,
                                    PedalFilterState& brake_state,
                                    const PedalFilterParams& throttle_params,
                                    const PedalFilterParams& brake_params, double idle_drive);

/// Convenience wrapper owning both filter streams.
class PedalConditioner {
 public:
  PedalConditioner() = default;
  PedalConditioner(const PedalFilterParams& throttle_params, const PedalFilterParams& brake_params,
                   double idle_drive);

  ConditionedCommand step(const DriverInput& input);

  double throttle_output() const { return throttle_state_.last_output; }
  double brake_output() const { return brake_state_.last_output; }

 private:
  PedalFilterParams throttle_params_;
  PedalFilterParams brake_params_;
  double idle_drive_ = 0.05;
  PedalFilterState throttle_state_;
  PedalFilterState brake_state_;
};

}  // namespace cuesim
