#include "cuesim/input_conditioning.hpp"

#include <cmath>

namespace cuesim {

const char* to_string(Gear g) {
  switch (g) {
    case Gear::Drive: return "D";
    case Gear::Neutral: return "N";
    case Gear::Reverse: return "R";
  }
  return "?";
}

void PedalFilterParams::validate() const {
  require(std::isfinite(time_constant_s) && time_constant_s > 0.0,
          "input.time_constant_s: must be > 0");
  require(std::isfinite(step_s) && step_s > 0.0, "input.step_s: must be > 0");
}

void DriverInput::validate() const {
  require(std::isfinite(throttle) && throttle >= 0.0 && throttle <= 1.0,
          "driver input: throttle must be in [0, 1]");
  require(std::isfinite(brake) && brake >= 0.0 && brake <= 1.0,
          "driver input: brake must be in [0, 1]");
  require(std::isfinite(steering_deg) && steering_deg >= -450.0 && steering_deg <= 450.0,
          "driver input: steering must be in [-450, 450] degrees");
}

LowPassResult low_pass_step(PedalFilterState state, double x, const PedalFilterParams& params) {
  params.validate();
  require(std::isfinite(x), "low_pass_step: input must be finite");
  const double alpha = params.alpha();
  const double y = state.last_output + alpha * (x - state.last_output);
  return {y, PedalFilterState{y}};
}

ConditionedCommand condition_pedals(const DriverInput& input, PedalFilterState& throttle_state,
                                    PedalFilterState& brake_state,
                                    const PedalFilterParams& throttle_params,
                                    const PedalFilterParams& brake_params, double idle_drive) {
  input.validate();
  require(std::isfinite(idle_drive) && idle_drive >= 0.0, "input.idle_drive: must be >= 0");

  const auto throttle = low_pass_step(throttle_state, input.throttle, throttle_params);
  const auto brake = low_pass_step(brake_state, input.brake, brake_params);
  throttle_state = throttle.state;
  brake_state = brake.state;

  ConditionedCommand cmd;
  cmd.drive_demand = throttle.output + (input.gear == Gear::Drive ? idle_drive : 0.0);
  cmd.brake_demand = brake.output;
  cmd.gear = input.gear;
  return cmd;
}

PedalConditioner::PedalConditioner(const PedalFilterParams& throttle_params,
                                   const PedalFilterParams& brake_params, double idle_drive)
    : throttle_params_(throttle_params), brake_params_(brake_params), idle_drive_(idle_drive) {}

ConditionedCommand PedalConditioner::step(const DriverInput& input) {
  return condition_pedals(input, throttle_state_, brake_state_, throttle_params_, brake_params_,
                          idle_drive_);
}

}  // namespace cuesim
