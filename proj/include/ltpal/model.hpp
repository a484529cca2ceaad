#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltpal {

using AgentId = std::string;
using WorldId = std::string;

/// True when `id` can be used as a data, class, agent or world identifier:
/// non-empty, no whitespace, none of the reserved characters
/// `: , ( ) [ ] { } ! & | $` and no `->` sequence.
bool is_valid_identifier(std::string_view id);

/// Propositional letter (x, c): class `class_id` was reported for datum `data_id`.
struct Atom {
  std::string data_id;
  std::string class_id;

  Atom() = default;
  Atom(std::string data, std::string cls);

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

using AtomSet = std::set<Atom>;

struct World {
  WorldId id;
  AtomSet atoms;

  bool operator==(const World&) const = default;
};

/// Partition of a model's worlds (by index) into equivalence blocks.
/// Blocks are ordered by their smallest member; members ascend.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::size_t world_count);  // all singletons
  Partition(std::size_t world_count, std::vector<std::vector<std::size_t>> blocks);

  std::size_t world_count() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_index(std::size_t world) const { return block_of_.at(world); }
  std::span<const std::size_t> block_of(std::size_t world) const;
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

using RelationPairs = std::vector<std::pair<WorldId, WorldId>>;

/// One frame's Kripke model: worlds, an agent roster and one equivalence
/// relation (stored as a partition) per agent.
class PalModel {
 public:
  PalModel() = default;
  PalModel(std::vector<World> worlds, std::vector<AgentId> agents,
           std::map<AgentId, Partition> relations);

  /// Builds a model from generating pairs; each relation is closed to an
  /// equivalence. Agents missing from `relations` get the identity relation.
  static PalModel from_pairs(std::vector<World> worlds, std::vector<AgentId> agents,
                             const std::map<AgentId, RelationPairs>& relations);

  std::size_t size() const { return worlds_.size(); }
  bool empty() const { return worlds_.empty(); }
  const std::vector<World>& worlds() const { return worlds_; }
  const World& world(std::size_t index) const { return worlds_.at(index); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  std::size_t require_index(std::string_view id) const;  // throws EvalError

  const std::vector<AgentId>& agents() const { return agents_; }
  bool has_agent(std::string_view agent) const;
  const Partition& relation(std::string_view agent) const;  // throws EvalError
  const std::map<AgentId, Partition>& relations() const { return relations_; }

  /// Returns a copy with every world's valuation replaced.
  PalModel with_valuation(std::vector<AtomSet> atoms) const;
  /// Returns a copy with the worlds renamed (same order and count).
  PalModel with_world_ids(std::vector<WorldId> ids) const;

  bool operator==(const PalModel&) const = default;

 private:
  void rebuild_index();

  std::vector<World> worlds_;
  std::vector<AgentId> agents_;
  std::map<AgentId, Partition> relations_;
  std::map<WorldId, std::size_t, std::less<>> index_;
};

/// Class-level implications c -> {c', ...}; apply to any datum.
class RuleSet {
 public:
  RuleSet() = default;

  /// Adds c -> implied; repeated calls for the same class merge.
  void add(const std::string& class_id, const std::set<std::string>& implied);
  const std::set<std::string>& implied_by(const std::string& class_id) const;
  bool empty() const { return rules_.empty(); }
  const std::map<std::string, std::set<std::string>>& rules() const { return rules_; }

  bool operator==(const RuleSet&) const = default;

 private:
  std::map<std::string, std::set<std::string>> rules_;
};

/// Finest partition of `worlds` in which every pair shares a block.
/// Blocks follow the order of `worlds`. Throws IngestError on unknown ids.
std::vector<std::vector<WorldId>> equivalence_closure(const RelationPairs& pairs,
                                                      const std::vector<WorldId>& worlds);

/// Least superset of `atoms` closed under the rules.
AtomSet rule_closure(const AtomSet& atoms, const RuleSet& rules);

/// Replaces each world's valuation by its rule closure.
PalModel enrich_model(const PalModel& model, const RuleSet& rules);

}  // namespace ltpal
