#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tpg/data_source.hpp"
#include "tpg/graph.hpp"

namespace tpg {

/// Contract for learning environments. Implementations must be deterministic:
/// the same reset seed followed by the same actions yields the same states,
/// scores and terminal flags. clone() must return a fully independent copy.
///
/// State lives in `state_`, a list of read-only data sources. Views returned
/// by state_sources() track the live state and stay valid for the lifetime of
/// the object.
class LearningEnvironment {
 public:
  virtual ~LearningEnvironment() = default;

  virtual std::string name() const = 0;
  virtual std::size_t action_count() const = 0;
  virtual void reset(std::uint64_t seed) = 0;
  /// Throws EnvironmentFault when called on a terminal state or with an
  /// action out of range.
  virtual void step(ActionId action) = 0;
  virtual double score() const = 0;
  virtual bool is_terminal() const = 0;
  /// Default episode length cap.
  virtual std::size_t horizon() const = 0;
  /// Lowest reachable episode score; used for failed episodes.
  virtual double min_score() const = 0;
  virtual std::unique_ptr<LearningEnvironment> clone() const = 0;

  std::vector<SourceShape> state_shapes() const;
  std::vector<DataSource> state_sources() const;
  StateSnapshot snapshot() const { return state_; }

 protected:
  LearningEnvironment() = default;
  LearningEnvironment(const LearningEnvironment&) = default;
  LearningEnvironment& operator=(const LearningEnvironment&) = default;

  StateSnapshot state_;
};

using EnvironmentFactory = std::function<std::unique_ptr<LearningEnvironment>()>;

/// Makes `name` selectable from configs and the command line. "pendulum" and
/// "tictactoe" are always available.
void register_environment(const std::string& name, EnvironmentFactory factory);

/// Throws Config for unknown names.
std::unique_ptr<LearningEnvironment> make_environment(const std::string& name);

std::vector<std::string> environment_names();

}  // namespace tpg
