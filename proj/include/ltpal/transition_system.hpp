#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltpal/model.hpp"

namespace ltpal {

/// Position of a state: layer index (0 = initial dummy) and world index.
struct StateRef {
  std::size_t layer = 0;
  std::size_t index = 0;

  bool operator==(const StateRef&) const = default;
};

/// Layered transition system (S, R, s0, s-1, ->, L). Layer 0 and the last
/// layer are single-world dummies with empty labels; transitions are the
/// complete bipartite relation between consecutive layers and are not
/// stored.
class TransitionSystem {
 public:
  TransitionSystem() = default;

  /// Assembles a system from all layers, dummies included. Validates
  /// disjoint ids, the dummy shape and a common agent roster.
  TransitionSystem(std::vector<PalModel> layers, std::map<std::string, std::vector<AgentId>> groups = {});

  const std::vector<AgentId>& agents() const { return layers_.front().agents(); }
  const std::map<std::string, std::vector<AgentId>>& groups() const { return groups_; }

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t real_layer_count() const { return layers_.size() - 2; }
  const PalModel& layer(std::size_t i) const { return layers_.at(i); }
  const std::vector<PalModel>& layers() const { return layers_; }

  const WorldId& initial() const { return layers_.front().world(0).id; }
  const WorldId& final_state() const { return layers_.back().world(0).id; }

  std::size_t state_count() const;
  /// |->| = sum over consecutive layers of |W_i| * |W_i+1|.
  std::uint64_t edge_count() const;
  /// Number of total paths; nullopt when it exceeds 2^64 - 1.
  std::optional<std::uint64_t> total_path_count() const;

  std::optional<StateRef> locate(std::string_view id) const;
  const World& state(StateRef ref) const { return layers_.at(ref.layer).world(ref.index); }
  const AtomSet& label(StateRef ref) const { return state(ref).atoms; }

  bool operator==(const TransitionSystem& o) const { return layers_ == o.layers_ && groups_ == o.groups_; }

 private:
  std::vector<PalModel> layers_;
  std::map<std::string, std::vector<AgentId>> groups_;
  std::map<WorldId, StateRef, std::less<>> index_;
};

/// Execution path w_i ... w_j: one world per consecutive layer, starting
/// at `first_layer`. May be empty.
struct ExecPath {
  std::size_t first_layer = 0;
  std::vector<std::size_t> choices;

  std::size_t size() const { return choices.size(); }
  bool empty() const { return choices.empty(); }
  StateRef at(std::size_t k) const { return {first_layer + k, choices.at(k)}; }

  bool operator==(const ExecPath&) const = default;
  auto operator<=>(const ExecPath&) const = default;
};

/// Builds the system from real frames: prepends/appends dummy layers whose
/// agents have reflexive-only relations. Frames must share an agent roster.
/// If world ids collide across frames, every real world is renamed
/// `L<layer>_<id>`.
TransitionSystem build_ts(std::vector<PalModel> frames,
                          std::map<std::string, std::vector<AgentId>> groups = {});

/// Total path: starts in s0 and ends in s-1.
bool is_total(const TransitionSystem& ts, const ExecPath& path);
/// Every position is a valid world of the consecutive layers.
bool is_valid_path(const TransitionSystem& ts, const ExecPath& path);

std::vector<WorldId> path_ids(const TransitionSystem& ts, const ExecPath& path);
/// Inverse of path_ids; throws EvalError on ids that do not form a path.
ExecPath path_from_ids(const TransitionSystem& ts, const std::vector<WorldId>& ids);

/// Drops the first k worlds (0 <= k <= size). Throws std::out_of_range.
ExecPath path_suffix(const ExecPath& path, std::size_t k);

/// Lazy enumeration of total paths in lexicographic order of per-layer
/// world indices.
class TotalPathEnumerator {
 public:
  explicit TotalPathEnumerator(const TransitionSystem& ts);

  /// Next path, or nullopt when exhausted.
  std::optional<ExecPath> next();

 private:
  std::vector<std::size_t> radix_;
  ExecPath current_;
  bool started_ = false;
  bool done_ = false;
};

/// The total path with the given rank in enumeration order.
ExecPath total_path_at(const TransitionSystem& ts, std::uint64_t rank);

}  // namespace ltpal
