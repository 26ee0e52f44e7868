#pragma once

#include <array>

#include "tpg/environment.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// Tic-tac-toe against a seeded uniform-random opponent. The agent moves
/// first. The state source is the 3x3 int8 board (0 empty, 1 agent,
/// 2 opponent). Scores: win +1, draw 0, loss -1, illegal move -10.
class TicTacToeEnv : public LearningEnvironment {
 public:
  static constexpr std::int8_t kEmpty = 0;
  static constexpr std::int8_t kAgent = 1;
  static constexpr std::int8_t kOpponent = 2;
  static constexpr double kIllegalMoveScore = -10.0;

  TicTacToeEnv();

  std::string name() const override { return "tictactoe"; }
  std::size_t action_count() const override { return 9; }
  void reset(std::uint64_t seed) override;
  void step(ActionId action) override;
  double score() const override { return score_; }
  bool is_terminal() const override { return terminal_; }
  std::size_t horizon() const override { return 9; }
  double min_score() const override { return kIllegalMoveScore; }
  std::unique_ptr<LearningEnvironment> clone() const override;

  std::int8_t cell(std::size_t i) const { return state_[0].i8()[i]; }
  /// Overwrites the board; for tests and scripted positions.
  void set_board(const std::array<std::int8_t, 9>& board);

  static bool wins(std::span<const std::int8_t> board, std::int8_t mark);

 private:
  bool board_full() const;

  Rng rng_;
  double score_ = 0.0;
  bool terminal_ = false;
};

}  // namespace tpg
