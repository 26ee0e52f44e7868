#include "tpg/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tpg {

PendulumEnv::PendulumEnv(PendulumConfig config) : config_(std::move(config)) {
  if (config_.torques.empty()) throw Fault(FaultKind::InvalidArgument, "pendulum without torques");
  state_.emplace_back(SourceShape::linear(ElementKind::Float64, 2));
}

double PendulumEnv::wrap_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  double wrapped = std::remainder(theta, 2.0 * pi);  // [-pi, pi]
  if (wrapped <= -pi) wrapped += 2.0 * pi;
  return wrapped;
}

void PendulumEnv::set_state(double theta, double theta_dot) {
  auto s = state_[0].f64();
  s[0] = wrap_angle(theta);
  s[1] = theta_dot;
}

void PendulumEnv::reset(std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  rng_.reset(seed);
  const double theta = rng_.uniform(-pi, pi);
  const double theta_dot = rng_.uniform(-1.0, 1.0);
  set_state(theta, theta_dot);
  score_ = 0.0;
  last_reward_ = 0.0;
  steps_ = 0;
}

void PendulumEnv::step(ActionId action) {
  if (is_terminal()) throw Fault(FaultKind::EnvironmentFault, "pendulum stepped after the horizon");
  if (action >= config_.torques.size()) {
    throw Fault(FaultKind::EnvironmentFault, "pendulum action " + std::to_string(action) + " out of range");
  }
  const double torque = config_.torques[action];
  const double g = config_.gravity;
  const double m = config_.mass;
  const double l = config_.length;

  auto s = state_[0].f64();
  const double accel = (3.0 * g / (2.0 * l)) * std::sin(s[0]) + 3.0 * torque / (m * l * l);
  s[1] = std::clamp(s[1] + accel * config_.dt, -config_.max_speed, config_.max_speed);
  s[0] = wrap_angle(s[0] + s[1] * config_.dt);

  last_reward_ = -(s[0] * s[0] + 0.1 * s[1] * s[1] + 0.001 * torque * torque);
  score_ += last_reward_;
  ++steps_;
}

double PendulumEnv::min_score() const {
  constexpr double pi = std::numbers::pi;
  double max_torque = 0.0;
  for (double t : config_.torques) max_torque = std::max(max_torque, std::abs(t));
  const double worst_step = pi * pi + 0.1 * config_.max_speed * config_.max_speed + 0.001 * max_torque * max_torque;
  return -worst_step * static_cast<double>(config_.horizon);
}

std::unique_ptr<LearningEnvironment> PendulumEnv::clone() const { return std::make_unique<PendulumEnv>(*this); }

}  // namespace tpg
