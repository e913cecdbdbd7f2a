#include <doctest.h>

#include <cmath>
#include <random>

#include "cuesim/platform_model.hpp"

using namespace cuesim;

namespace {

const PlatformLimits kLimits{};
constexpr double kDt = 1.0 / 90.0;

}  // namespace

TEST_CASE("clamp_pose enforces the asymmetric pitch range") {
  CHECK(clamp_pose({0, 0, 0}, kLimits).pitch_deg == 0.0);
  CHECK(clamp_pose({10.0, 0, 0}, kLimits).pitch_deg == doctest::Approx(6.6));
  CHECK(clamp_pose({-10.0, 0, 12.0}, kLimits).pitch_deg == doctest::Approx(-4.4));
  CHECK(clamp_pose({-10.0, 0, 12.0}, kLimits).yaw_deg == doctest::Approx(10.0));
  CHECK(clamp_pose({0, -11.0, 0}, kLimits).roll_deg == doctest::Approx(-9.0));
}

TEST_CASE("clamp_pose is an idempotent projection") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int k = 0; k < 2000; ++k) {
    const PlatformPose p{dist(rng), dist(rng), dist(rng)};
    const PlatformPose once = clamp_pose(p, kLimits);
    const PlatformPose twice = clamp_pose(once, kLimits);
    CHECK(once.pitch_deg == twice.pitch_deg);
    CHECK(once.roll_deg == twice.roll_deg);
    CHECK(once.yaw_deg == twice.yaw_deg);
    CHECK(once.pitch_deg >= kLimits.pitch_min_deg);
    CHECK(once.pitch_deg <= kLimits.pitch_max_deg);
  }
}

TEST_CASE("inverse kinematics at the published end stops") {
  SUBCASE("zero pose means zero motors") {
    const auto m = inverse_kinematics({0, 0, 0}, kLimits);
    CHECK(m.front_left_deg == 0.0);
    CHECK(m.front_right_deg == 0.0);
    CHECK(m.rear_deg == 0.0);
  }
  SUBCASE("full pitch drives both front motors to 20") {
    const auto m = inverse_kinematics({6.6, 0, 0}, kLimits);
    CHECK(m.front_left_deg == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(m.front_right_deg == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(m.rear_deg == 0.0);
  }
  SUBCASE("full pitch plus full roll saturates proportionally") {
    const auto m = inverse_kinematics({6.6, 9.0, 0}, kLimits);
    CHECK(m.front_left_deg == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(m.front_right_deg == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("full yaw drives the rear motor to 20") {
    const auto m = inverse_kinematics({0, 0, 10.0}, kLimits);
    CHECK(m.rear_deg == doctest::Approx(20.0).epsilon(1e-12));
  }
}

TEST_CASE("forward kinematics at the published end stops") {
  CHECK(forward_kinematics({0, 0, 0}, kLimits).pitch_deg == 0.0);
  const auto full_pitch = forward_kinematics({20, 20, 0}, kLimits);
  CHECK(full_pitch.pitch_deg == doctest::Approx(6.6).epsilon(1e-12));
  CHECK(full_pitch.roll_deg == 0.0);
  const auto full_roll = forward_kinematics({20, -20, 0}, kLimits);
  CHECK(full_roll.roll_deg == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(full_roll.pitch_deg == 0.0);
}

TEST_CASE("fk(ik(pose)) is the identity for unsaturated poses") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pitch(kLimits.pitch_min_deg, kLimits.pitch_max_deg);
  std::uniform_real_distribution<double> roll(-kLimits.roll_limit_deg, kLimits.roll_limit_deg);
  std::uniform_real_distribution<double> yaw(-kLimits.yaw_limit_deg, kLimits.yaw_limit_deg);
  int tested = 0;
  while (tested < 20000) {
    const PlatformPose p{pitch(rng), roll(rng), yaw(rng)};
    const double total = std::abs(p.pitch_deg / kLimits.pitch_scale()) +
                         std::abs(p.roll_deg / kLimits.roll_scale());
    if (total > kLimits.motor_limit_deg) continue;  // saturated requests are not invertible
    ++tested;
    const PlatformPose back = forward_kinematics(inverse_kinematics(p, kLimits), kLimits);
    CHECK(std::abs(back.pitch_deg - p.pitch_deg) <= 1e-9);
    CHECK(std::abs(back.roll_deg - p.roll_deg) <= 1e-9);
    CHECK(std::abs(back.yaw_deg - p.yaw_deg) <= 1e-9);
  }
}

TEST_CASE("proportional saturation preserves the requested roll:pitch ratio") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pitch(0.5, 6.6);
  std::uniform_real_distribution<double> roll(0.5, 9.0);
  for (int k = 0; k < 2000; ++k) {
    const PlatformPose p{pitch(rng), roll(rng), 0.0};
    const auto m = inverse_kinematics(p, kLimits);
    const double s = (m.front_left_deg + m.front_right_deg) / 2.0;
    const double d = (m.front_left_deg - m.front_right_deg) / 2.0;
    if (s == 0.0 || d == 0.0) continue;
    const double requested_ratio =
        (p.roll_deg / kLimits.roll_scale()) / (p.pitch_deg / kLimits.pitch_scale());
    CHECK(d / s == doctest::Approx(requested_ratio).epsilon(1e-9));
    CHECK(std::abs(s) + std::abs(d) <= kLimits.motor_limit_deg + 1e-9);
  }
}

TEST_CASE("rate limit: one 90 Hz frame travels at most 80/90 degrees") {
  const auto m = rate_limit_step({0, 0, 0}, {20, -20, 20}, kDt, kLimits);
  CHECK(m.front_left_deg == doctest::Approx(80.0 / 90.0).epsilon(1e-12));
  CHECK(m.front_right_deg == doctest::Approx(-80.0 / 90.0).epsilon(1e-12));
  CHECK(m.rear_deg == doctest::Approx(80.0 / 90.0).epsilon(1e-12));
}

TEST_CASE("rate limit: already at target stays put; small moves complete") {
  const MotorAngles prev{1.0, -2.0, 3.0};
  const auto same = rate_limit_step(prev, prev, kDt, kLimits);
  CHECK(same.front_left_deg == 1.0);
  const auto small = rate_limit_step({0, 0, 0}, {0.5, 0.5, 0.5}, kDt, kLimits);
  CHECK(small.front_left_deg == 0.5);
}

TEST_CASE("rate limit bounds per-frame deltas over random command traces") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> cmd(-20.0, 20.0);
  std::uniform_real_distribution<double> step(1e-4, 0.05);
  MotorAngles m;
  for (int k = 0; k < 5000; ++k) {
    const double dt = step(rng);
    const MotorAngles target{cmd(rng), cmd(rng), cmd(rng)};
    const MotorAngles next = rate_limit_step(m, target, dt, kLimits);
    const double bound = kLimits.motor_rate_deg_per_s * dt + 1e-12;
    CHECK(std::abs(next.front_left_deg - m.front_left_deg) <= bound);
    CHECK(std::abs(next.front_right_deg - m.front_right_deg) <= bound);
    CHECK(std::abs(next.rear_deg - m.rear_deg) <= bound);
    m = next;
  }
}

TEST_CASE("servo shaping: dead zone, clip, and smoothing") {
  SUBCASE("commands inside the dead zone collapse to zero") {
    ServoState state;
    const ServoParams params{0.5, 20.0, 0.0, 1.0};
    const auto out = apply_servo_shaping({0.3, -0.49, 0.5}, state, params, kDt);
    CHECK(out.front_left_deg == 0.0);
    CHECK(out.front_right_deg == 0.0);
    CHECK(out.rear_deg == 0.5);  // at the edge is outside the zone
  }
  SUBCASE("clipping") {
    ServoState state;
    const ServoParams params{0.0, 15.0, 0.0, 1.0};
    const auto out = apply_servo_shaping({18.0, -18.0, 3.0}, state, params, kDt);
    CHECK(out.front_left_deg == 15.0);
    CHECK(out.front_right_deg == -15.0);
    CHECK(out.rear_deg == 3.0);
  }
  SUBCASE("smoothing follows the shared first-order closed form") {
    ServoState state;
    const ServoParams params{0.0, 20.0, 0.1, 1.0};
    const double alpha = kDt / (0.1 + kDt);
    double expected = 0.0;
    for (int k = 1; k <= 200; ++k) {
      const auto out = apply_servo_shaping({10.0, 10.0, 10.0}, state, params, kDt);
      expected = 10.0 * (1.0 - std::pow(1.0 - alpha, k));
      CHECK(out.front_left_deg == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("zero smoothing time constant passes commands through") {
    ServoState state;
    const ServoParams params{0.0, 20.0, 0.0, 1.0};
    const auto out = apply_servo_shaping({7.0, -3.0, 1.0}, state, params, kDt);
    CHECK(out.front_left_deg == 7.0);
  }
}

TEST_CASE("rig chain: achieved pose stays inside the limits under wild targets") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> wild(-50.0, 50.0);
  PlatformRig rig(kLimits, ServoParams{0.25, 18.0, 0.05, 1.0});
  MotorAngles prev = rig.motors();
  for (int k = 0; k < 20000; ++k) {
    const auto res = rig.step({wild(rng), wild(rng), wild(rng)}, kDt);
    CHECK(res.achieved_pose.pitch_deg >= kLimits.pitch_min_deg - 1e-9);
    CHECK(res.achieved_pose.pitch_deg <= kLimits.pitch_max_deg + 1e-9);
    CHECK(std::abs(res.achieved_pose.roll_deg) <= kLimits.roll_limit_deg + 1e-9);
    CHECK(std::abs(res.achieved_pose.yaw_deg) <= kLimits.yaw_limit_deg + 1e-9);
    const double bound = kLimits.motor_rate_deg_per_s * kDt + 1e-12;
    CHECK(std::abs(res.achieved_motors.front_left_deg - prev.front_left_deg) <= bound);
    CHECK(std::abs(res.achieved_motors.front_right_deg - prev.front_right_deg) <= bound);
    CHECK(std::abs(res.achieved_motors.rear_deg - prev.rear_deg) <= bound);
    prev = res.achieved_motors;
  }
}

TEST_CASE("servo clip larger than the motor range is rejected") {
  ServoParams params;
  params.clip_deg = 25.0;
  CHECK_THROWS_AS(params.validate(kLimits), ValidationError);
}
