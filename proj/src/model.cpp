#include "ltpal/model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "ltpal/error.hpp"

namespace ltpal {

namespace {

constexpr std::string_view kReserved = ":,()[]{}!&|$";

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so block order is stable.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<std::size_t>> closure_by_index(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  UnionFind uf(n);
  for (auto [a, b] : pairs) uf.unite(a, b);
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = uf.find(i);
    if (slot[root] == n) {
      slot[root] = blocks.size();
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

}  // namespace

bool is_valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (std::size_t i = 0; i < id.size(); ++i) {
    auto c = static_cast<unsigned char>(id[i]);
    if (c < 0x80 && (std::isspace(c) || !std::isprint(c))) return false;
    if (kReserved.find(static_cast<char>(c)) != std::string_view::npos) return false;
    if (c == '-' && i + 1 < id.size() && id[i + 1] == '>') return false;
  }
  return true;
}

Atom::Atom(std::string data, std::string cls) : data_id(std::move(data)), class_id(std::move(cls)) {
  if (!is_valid_identifier(data_id)) throw IngestError("invalid data id '" + data_id + "'");
  if (!is_valid_identifier(class_id)) throw IngestError("invalid class id '" + class_id + "'");
}

Partition::Partition(std::size_t world_count) : block_of_(world_count) {
  blocks_.reserve(world_count);
  for (std::size_t i = 0; i < world_count; ++i) {
    blocks_.push_back({i});
    block_of_[i] = i;
  }
}

Partition::Partition(std::size_t world_count, std::vector<std::vector<std::size_t>> blocks)
    : block_of_(world_count, world_count) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::erase_if(blocks, [](const auto& b) { return b.empty(); });
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t w : blocks[k]) {
      if (w >= world_count) throw IngestError("partition refers to world index out of range");
      if (block_of_[w] != world_count) throw IngestError("partition blocks overlap");
      block_of_[w] = k;
    }
  }
  if (std::find(block_of_.begin(), block_of_.end(), world_count) != block_of_.end())
    throw IngestError("partition does not cover every world");
  blocks_ = std::move(blocks);
}

std::span<const std::size_t> Partition::block_of(std::size_t world) const {
  return blocks_.at(block_of_.at(world));
}

PalModel::PalModel(std::vector<World> worlds, std::vector<AgentId> agents,
                   std::map<AgentId, Partition> relations)
    : worlds_(std::move(worlds)), agents_(std::move(agents)), relations_(std::move(relations)) {
  rebuild_index();
  std::set<AgentId> seen;
  for (const auto& a : agents_) {
    if (!is_valid_identifier(a)) throw IngestError("invalid agent id '" + a + "'");
    if (!seen.insert(a).second) throw IngestError("duplicate agent '" + a + "'");
    auto it = relations_.find(a);
    if (it == relations_.end()) {
      relations_.emplace(a, Partition(worlds_.size()));
    } else if (it->second.world_count() != worlds_.size()) {
      throw IngestError("relation of agent '" + a + "' does not match the world count");
    }
  }
  for (const auto& [a, p] : relations_) {
    if (!seen.contains(a)) throw IngestError("relation given for unknown agent '" + a + "'");
  }
}

void PalModel::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (!is_valid_identifier(worlds_[i].id)) throw IngestError("invalid world id '" + worlds_[i].id + "'");
    if (!index_.emplace(worlds_[i].id, i).second)
      throw IngestError("duplicate world id '" + worlds_[i].id + "'");
  }
}

PalModel PalModel::from_pairs(std::vector<World> worlds, std::vector<AgentId> agents,
                              const std::map<AgentId, RelationPairs>& relations) {
  std::map<WorldId, std::size_t> index;
  for (std::size_t i = 0; i < worlds.size(); ++i) index.emplace(worlds[i].id, i);
  std::map<AgentId, Partition> parts;
  for (const auto& [agent, pairs] : relations) {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    idx.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
      auto ia = index.find(a);
      if (ia == index.end()) throw IngestError("relation of agent '" + agent + "' names unknown world '" + a + "'");
      auto ib = index.find(b);
      if (ib == index.end()) throw IngestError("relation of agent '" + agent + "' names unknown world '" + b + "'");
      idx.emplace_back(ia->second, ib->second);
    }
    parts.emplace(agent, Partition(worlds.size(), closure_by_index(worlds.size(), idx)));
  }
  return PalModel(std::move(worlds), std::move(agents), std::move(parts));
}

std::optional<std::size_t> PalModel::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PalModel::require_index(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw EvalError("unknown world '" + std::string(id) + "'");
  return *idx;
}

bool PalModel::has_agent(std::string_view agent) const {
  return relations_.find(std::string(agent)) != relations_.end();
}

const Partition& PalModel::relation(std::string_view agent) const {
  auto it = relations_.find(std::string(agent));
  if (it == relations_.end()) throw EvalError("unknown agent '" + std::string(agent) + "'");
  return it->second;
}

PalModel PalModel::with_valuation(std::vector<AtomSet> atoms) const {
  if (atoms.size() != worlds_.size()) throw Error("valuation size mismatch");
  PalModel copy = *this;
  for (std::size_t i = 0; i < atoms.size(); ++i) copy.worlds_[i].atoms = std::move(atoms[i]);
  return copy;
}

PalModel PalModel::with_world_ids(std::vector<WorldId> ids) const {
  if (ids.size() != worlds_.size()) throw Error("world id list size mismatch");
  PalModel copy = *this;
  for (std::size_t i = 0; i < ids.size(); ++i) copy.worlds_[i].id = std::move(ids[i]);
  copy.rebuild_index();
  return copy;
}

void RuleSet::add(const std::string& class_id, const std::set<std::string>& implied) {
  if (!is_valid_identifier(class_id)) throw IngestError("invalid class id '" + class_id + "' in rules");
  for (const auto& c : implied) {
    if (!is_valid_identifier(c)) throw IngestError("invalid class id '" + c + "' in rules");
  }
  rules_[class_id].insert(implied.begin(), implied.end());
}

const std::set<std::string>& RuleSet::implied_by(const std::string& class_id) const {
  static const std::set<std::string> kNone;
  auto it = rules_.find(class_id);
  return it == rules_.end() ? kNone : it->second;
}

std::vector<std::vector<WorldId>> equivalence_closure(const RelationPairs& pairs,
                                                      const std::vector<WorldId>& worlds) {
  std::map<WorldId, std::size_t> index;
  for (std::size_t i = 0; i < worlds.size(); ++i) index.emplace(worlds[i], i);
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [a, b] : pairs) {
    auto ia = index.find(a);
    if (ia == index.end()) throw IngestError("unknown world id '" + a + "' in relation");
    auto ib = index.find(b);
    if (ib == index.end()) throw IngestError("unknown world id '" + b + "' in relation");
    idx.emplace_back(ia->second, ib->second);
  }
  std::vector<std::vector<WorldId>> out;
  for (const auto& block : closure_by_index(worlds.size(), idx)) {
    auto& named = out.emplace_back();
    for (std::size_t i : block) named.push_back(worlds[i]);
  }
  return out;
}

AtomSet rule_closure(const AtomSet& atoms, const RuleSet& rules) {
  AtomSet result = atoms;
  std::vector<Atom> pending(atoms.begin(), atoms.end());
  while (!pending.empty()) {
    Atom a = std::move(pending.back());
    pending.pop_back();
    for (const auto& implied : rules.implied_by(a.class_id)) {
      Atom next{a.data_id, implied};
      if (result.insert(next).second) pending.push_back(std::move(next));
    }
  }
  return result;
}

PalModel enrich_model(const PalModel& model, const RuleSet& rules) {
  if (rules.empty()) return model;
  std::vector<AtomSet> atoms;
  atoms.reserve(model.size());
  for (const auto& w : model.worlds()) atoms.push_back(rule_closure(w.atoms, rules));
  return model.with_valuation(std::move(atoms));
}

}  // namespace ltpal
