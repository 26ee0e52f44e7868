#include "tpg/archive.hpp"

#include <bit>
#include <cmath>

#include "tpg/parallel.hpp"

namespace tpg {

void Archive::insert(StateSnapshot snapshot) {
  if (capacity_ == 0) return;
  if (snapshots_.size() == capacity_) snapshots_.erase(snapshots_.begin());
  snapshots_.push_back(std::move(snapshot));
  ++version_;
  signatures_.clear();
  keys_.clear();
}

void Archive::refresh_signatures(const TpgGraph& graph, std::size_t nb_threads) {
  for (auto it = signatures_.begin(); it != signatures_.end();) {
    if (!graph.has_edge(it->first)) {
      it = signatures_.erase(it);
    } else {
      ++it;
    }
  }
  std::vector<EdgeId> missing;
  for (const auto& [id, edge] : graph.edges()) {
    if (!signatures_.contains(id)) missing.push_back(id);
  }
  auto computed = compute_bid_vectors(graph, missing, snapshots_, nb_threads);
  for (std::size_t i = 0; i < missing.size(); ++i) signatures_.emplace(missing[i], std::move(computed[i]));

  keys_.clear();
  for (const auto& [id, bids] : signatures_) keys_.insert(key_of(bids));
}

void Archive::forget(EdgeId edge) {
  auto it = signatures_.find(edge);
  if (it == signatures_.end()) return;
  auto key = keys_.find(key_of(it->second));
  if (key != keys_.end()) keys_.erase(key);
  signatures_.erase(it);
}

bool Archive::has_signature(std::span<const double> bids) const { return keys_.contains(key_of(bids)); }

Archive::Key Archive::key_of(std::span<const double> bids) {
  Key key;
  key.reserve(bids.size());
  for (double b : bids) {
    key.push_back(std::isnan(b) ? 0x7ff8000000000000ULL : std::bit_cast<std::uint64_t>(b));
  }
  return key;
}

bool is_original(const Program& program, const Archive& archive, ProgramExecutor& executor) {
  if (archive.empty()) return true;
  const auto bids = bids_on(executor, program, archive.snapshots());
  return !archive.has_signature(bids);
}

bool is_original(const Program& program, const Archive& archive, const ProgramContext& context) {
  ProgramExecutor executor(context);
  return is_original(program, archive, executor);
}

void archive_maybe_record(Archive& archive, StateSnapshot snapshot, double probability, Rng& rng) {
  if (rng.bernoulli(probability)) archive.insert(std::move(snapshot));
}

}  // namespace tpg
