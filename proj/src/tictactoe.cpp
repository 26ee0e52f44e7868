#include "tpg/tictactoe.hpp"

#include <algorithm>

namespace tpg {

namespace {
constexpr std::array<std::array<int, 3>, 8> kLines{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},
    {0, 4, 8}, {2, 4, 6},
}};
}  // namespace

TicTacToeEnv::TicTacToeEnv() { state_.emplace_back(SourceShape::grid(ElementKind::Int8, 3, 3)); }

bool TicTacToeEnv::wins(std::span<const std::int8_t> board, std::int8_t mark) {
  return std::any_of(kLines.begin(), kLines.end(), [&](const auto& line) {
    return board[line[0]] == mark && board[line[1]] == mark && board[line[2]] == mark;
  });
}

bool TicTacToeEnv::board_full() const {
  const auto board = state_[0].i8();
  return std::none_of(board.begin(), board.end(), [](std::int8_t c) { return c == kEmpty; });
}

void TicTacToeEnv::set_board(const std::array<std::int8_t, 9>& board) {
  std::copy(board.begin(), board.end(), state_[0].i8().begin());
}

void TicTacToeEnv::reset(std::uint64_t seed) {
  rng_.reset(seed);
  auto board = state_[0].i8();
  std::fill(board.begin(), board.end(), kEmpty);
  score_ = 0.0;
  terminal_ = false;
}

void TicTacToeEnv::step(ActionId action) {
  if (terminal_) throw Fault(FaultKind::EnvironmentFault, "tic-tac-toe stepped after the game ended");
  if (action >= 9) throw Fault(FaultKind::EnvironmentFault, "cell " + std::to_string(action) + " out of range");
  auto board = state_[0].i8();

  if (board[action] != kEmpty) {
    score_ = kIllegalMoveScore;
    terminal_ = true;
    return;
  }
  board[action] = kAgent;
  if (wins(board, kAgent)) {
    score_ = 1.0;
    terminal_ = true;
    return;
  }
  if (board_full()) {
    score_ = 0.0;
    terminal_ = true;
    return;
  }

  std::array<std::size_t, 9> free{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < 9; ++i) {
    if (board[i] == kEmpty) free[n++] = i;
  }
  board[free[rng_.uniform_index(n)]] = kOpponent;
  if (wins(board, kOpponent)) {
    score_ = -1.0;
    terminal_ = true;
  } else if (board_full()) {
    score_ = 0.0;
    terminal_ = true;
  }
}

std::unique_ptr<LearningEnvironment> TicTacToeEnv::clone() const { return std::make_unique<TicTacToeEnv>(*this); }

}  // namespace tpg
