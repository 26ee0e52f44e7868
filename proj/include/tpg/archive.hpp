#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "tpg/data_source.hpp"
#include "tpg/graph.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// Bounded store of state snapshots plus the behavioural signature (bid
/// vector over the stored snapshots) of every live program. A mutated program
/// is original when its signature differs from all cached ones.
class Archive {
 public:
  explicit Archive(std::size_t capacity = 50) : capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return snapshots_.size(); }
  bool empty() const noexcept { return snapshots_.empty(); }
  std::span<const StateSnapshot> snapshots() const noexcept { return snapshots_; }

  /// Appends a snapshot, evicting the oldest when full. Invalidates every
  /// cached signature.
  void insert(StateSnapshot snapshot);

  /// Brings the signature cache in line with `graph`: drops signatures of
  /// removed edges and computes missing ones using up to `nb_threads` threads.
  void refresh_signatures(const TpgGraph& graph, std::size_t nb_threads = 1);

  /// Drops the cached signature of one edge, e.g. after its program changed.
  void forget(EdgeId edge);

  const std::map<EdgeId, std::vector<double>>& signatures() const noexcept { return signatures_; }

  /// True when some cached signature equals `bids` bit for bit (all NaNs equal).
  bool has_signature(std::span<const double> bids) const;

  /// Increments on every insert.
  std::uint64_t version() const noexcept { return version_; }

  bool operator==(const Archive& other) const {
    return capacity_ == other.capacity_ && snapshots_ == other.snapshots_;
  }

 private:
  using Key = std::vector<std::uint64_t>;
  static Key key_of(std::span<const double> bids);

  std::size_t capacity_;
  std::vector<StateSnapshot> snapshots_;
  std::uint64_t version_ = 0;
  std::map<EdgeId, std::vector<double>> signatures_;
  std::multiset<Key> keys_;
};

/// True when the archive is empty or the program's bids on the archived
/// snapshots differ from every cached signature in at least one component.
bool is_original(const Program& program, const Archive& archive, ProgramExecutor& executor);
bool is_original(const Program& program, const Archive& archive, const ProgramContext& context);

/// One draw from `rng`; inserts `snapshot` with probability `probability`.
void archive_maybe_record(Archive& archive, StateSnapshot snapshot, double probability, Rng& rng);

}  // namespace tpg
