#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tpg/pendulum.hpp"
#include "tpg/tictactoe.hpp"

using namespace tpg;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr ActionId kNoTorque = 3;

FaultKind fault_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Fault& f) {
    return f.kind();
  }
  FAIL("expected a fault");
  return FaultKind::Io;
}

}  // namespace

TEST_SUITE("environments") {
  TEST_CASE("pendulum dynamics from a horizontal start") {
    PendulumEnv env;
    env.reset(1);
    env.set_state(kPi / 2, 0.0);
    env.step(kNoTorque);
    CHECK(env.angular_velocity() == doctest::Approx(0.73575).epsilon(1e-12));
    CHECK(env.angle() == doctest::Approx(kPi / 2 + 0.73575 * 0.05).epsilon(1e-12));
    const double theta = env.angle();
    const double theta_dot = env.angular_velocity();
    CHECK(env.last_reward() == doctest::Approx(-(theta * theta + 0.1 * theta_dot * theta_dot)).epsilon(1e-12));
    CHECK(env.score() == env.last_reward());
    CHECK(env.steps() == 1);
  }

  TEST_CASE("pendulum torque and speed clamp") {
    PendulumEnv env;
    env.reset(0);
    env.set_state(0.0, 0.0);
    env.step(6);  // +2 torque: accel 6
    CHECK(env.angular_velocity() == doctest::Approx(0.3).epsilon(1e-12));
    env.set_state(kPi / 2, 7.9);
    env.step(6);
    CHECK(env.angular_velocity() == 8.0);
    env.set_state(-kPi / 2, -7.9);
    env.step(0);
    CHECK(env.angular_velocity() == -8.0);
  }

  TEST_CASE("pendulum angles wrap into (-pi, pi]") {
    CHECK(PendulumEnv::wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(PendulumEnv::wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(PendulumEnv::wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(PendulumEnv::wrap_angle(0.25) == 0.25);
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
      const double w = PendulumEnv::wrap_angle(rng.uniform(-50, 50));
      CHECK(w > -kPi);
      CHECK(w <= kPi);
    }
  }

  TEST_CASE("pendulum reset is deterministic per seed") {
    PendulumEnv a;
    PendulumEnv b;
    a.reset(17);
    b.reset(17);
    CHECK(a.snapshot() == b.snapshot());
    CHECK(a.score() == 0.0);
    CHECK(a.angle() >= -kPi);
    CHECK(a.angle() <= kPi);
    CHECK(std::abs(a.angular_velocity()) <= 1.0);
    b.reset(18);
    CHECK_FALSE(a.snapshot() == b.snapshot());
    for (ActionId act : {0u, 5u, 2u, 2u}) {
      a.step(act);
      a.reset(17);
    }
    b.reset(17);
    CHECK(a.snapshot() == b.snapshot());
  }

  TEST_CASE("pendulum horizon, rewards and faults") {
    PendulumConfig config;
    config.horizon = 50;
    PendulumEnv env(config);
    Rng rng(3);
    env.reset(9);
    double sum = 0.0;
    while (!env.is_terminal()) {
      env.step(static_cast<ActionId>(rng.uniform_index(env.action_count())));
      CHECK(env.last_reward() <= 0.0);
      CHECK(env.last_reward() >= env.min_score() / 50.0);
      sum += env.last_reward();
    }
    CHECK(env.steps() == 50);
    CHECK(env.score() == doctest::Approx(sum));
    CHECK(env.score() >= env.min_score());
    CHECK(fault_of([&] { env.step(0); }) == FaultKind::EnvironmentFault);
    env.reset(9);
    CHECK(fault_of([&] { env.step(7); }) == FaultKind::EnvironmentFault);
  }

  TEST_CASE("pendulum clones are independent") {
    PendulumEnv env;
    env.reset(4);
    auto copy = env.clone();
    env.step(6);
    env.step(6);
    CHECK(copy->score() == 0.0);
    CHECK_FALSE(copy->snapshot() == env.snapshot());
    const auto sources = copy->state_sources();
    REQUIRE(sources.size() == 1);
    OperandScratch scratch;
    scratch.reserve({1, 0, 0});
    CHECK(sources[0].get_data(OperandType::scalar(ElementKind::Float64), 0, scratch).scalar<double>() ==
          static_cast<PendulumEnv&>(*copy).angle());
  }

  TEST_CASE("pendulum state source layout") {
    PendulumEnv env;
    CHECK(env.action_count() == 7);
    CHECK(env.horizon() == 500);
    const auto shapes = env.state_shapes();
    REQUIRE(shapes.size() == 1);
    CHECK(shapes[0] == SourceShape::linear(ElementKind::Float64, 2));
    // State views track the live state.
    const auto views = env.state_sources();
    env.reset(1);
    env.set_state(0.125, -0.5);
    OperandScratch scratch;
    scratch.reserve({2, 0, 0});
    CHECK(views[0].get_data(OperandType::scalar(ElementKind::Float64), 1, scratch).scalar<double>() == -0.5);
  }

  TEST_CASE("tic-tac-toe win, illegal move, draw and loss") {
    using B = std::array<std::int8_t, 9>;
    constexpr std::int8_t A = TicTacToeEnv::kAgent;
    constexpr std::int8_t O = TicTacToeEnv::kOpponent;
    TicTacToeEnv env;

    env.reset(1);
    env.set_board(B{A, A, 0, O, O, 0, 0, 0, 0});
    env.step(2);
    CHECK(env.is_terminal());
    CHECK(env.score() == 1.0);

    env.reset(1);
    env.set_board(B{A, 0, 0, O, 0, 0, 0, 0, 0});
    env.step(3);
    CHECK(env.is_terminal());
    CHECK(env.score() == -10.0);
    CHECK(fault_of([&] { env.step(4); }) == FaultKind::EnvironmentFault);

    env.reset(1);
    env.set_board(B{A, O, A, A, O, O, O, A, 0});
    env.step(8);
    CHECK(env.is_terminal());
    CHECK(env.score() == 0.0);

    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      env.reset(seed);
      env.set_board(B{O, O, 0, O, A, 0, 0, A, A});
      env.step(5);
      CHECK(env.is_terminal());
      CHECK(env.score() == -1.0);
    }
  }

  TEST_CASE("tic-tac-toe games end within the horizon with a valid score") {
    TicTacToeEnv env;
    Rng rng(12);
    CHECK(env.state_shapes()[0] == SourceShape::grid(ElementKind::Int8, 3, 3));
    for (int game = 0; game < 200; ++game) {
      env.reset(rng.next_u64());
      for (std::size_t i = 0; i < 9; ++i) CHECK(env.cell(i) == TicTacToeEnv::kEmpty);
      std::size_t steps = 0;
      while (!env.is_terminal()) {
        std::vector<ActionId> free;
        for (ActionId c = 0; c < 9; ++c) {
          if (env.cell(c) == TicTacToeEnv::kEmpty) free.push_back(c);
        }
        env.step(free[rng.uniform_index(free.size())]);
        ++steps;
      }
      CHECK(steps <= env.horizon());
      const double s = env.score();
      CHECK((s == 1.0 || s == 0.0 || s == -1.0));
    }
    CHECK(fault_of([&] {
            env.reset(0);
            env.step(9);
          }) == FaultKind::EnvironmentFault);
  }

  TEST_CASE("environment registry") {
    CHECK(make_environment("pendulum")->name() == "pendulum");
    CHECK(make_environment("tictactoe")->action_count() == 9);
    CHECK(fault_of([] { (void)make_environment("cartpole"); }) == FaultKind::Config);
    register_environment("short-pendulum", [] {
      PendulumConfig c;
      c.horizon = 5;
      return std::make_unique<PendulumEnv>(c);
    });
    CHECK(make_environment("short-pendulum")->horizon() == 5);
  }
}
