#include "tpg/environment.hpp"

#include <map>
#include <mutex>

#include "tpg/pendulum.hpp"
#include "tpg/tictactoe.hpp"

namespace tpg {

std::vector<SourceShape> LearningEnvironment::state_shapes() const {
  std::vector<SourceShape> shapes;
  for (const auto& buffer : state_) shapes.push_back(buffer.shape());
  return shapes;
}

std::vector<DataSource> LearningEnvironment::state_sources() const { return views_of(state_); }

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, EnvironmentFactory> factories{
      {"pendulum", [] { return std::make_unique<PendulumEnv>(); }},
      {"tictactoe", [] { return std::make_unique<TicTacToeEnv>(); }},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_environment(const std::string& name, EnvironmentFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<LearningEnvironment> make_environment(const std::string& name) {
  EnvironmentFactory factory;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(name);
    if (it == r.factories.end()) throw Fault(FaultKind::Config, "unknown environment '" + name + "'");
    factory = it->second;
  }
  return factory();
}

std::vector<std::string> environment_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, factory] : r.factories) names.push_back(name);
  return names;
}

}  // namespace tpg
