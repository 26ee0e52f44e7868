#pragma once

#include <vector>

#include "tpg/environment.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// Frictionless pendulum swing-up. Angle 0 is upright; the state source is
/// [theta, theta_dot] as float64.
struct PendulumConfig {
  double gravity = 9.81;
  double mass = 1.0;
  double length = 1.0;
  double dt = 0.05;
  double max_speed = 8.0;
  std::vector<double> torques{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  std::size_t horizon = 500;
};

class PendulumEnv : public LearningEnvironment {
 public:
  explicit PendulumEnv(PendulumConfig config = {});

  std::string name() const override { return "pendulum"; }
  std::size_t action_count() const override { return config_.torques.size(); }
  void reset(std::uint64_t seed) override;
  void step(ActionId action) override;
  double score() const override { return score_; }
  bool is_terminal() const override { return steps_ >= config_.horizon; }
  std::size_t horizon() const override { return config_.horizon; }
  double min_score() const override;
  std::unique_ptr<LearningEnvironment> clone() const override;

  double angle() const { return state_[0].f64()[0]; }
  double angular_velocity() const { return state_[0].f64()[1]; }
  std::size_t steps() const { return steps_; }
  double last_reward() const { return last_reward_; }
  const PendulumConfig& config() const { return config_; }

  /// Places the pendulum in a given state; the angle is wrapped.
  void set_state(double theta, double theta_dot);

  /// Wraps into (-pi, pi].
  static double wrap_angle(double theta);

 private:
  PendulumConfig config_;
  Rng rng_;
  double score_ = 0.0;
  double last_reward_ = 0.0;
  std::size_t steps_ = 0;
};

}  // namespace tpg
