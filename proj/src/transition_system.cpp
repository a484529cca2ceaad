#include "ltpal/transition_system.hpp"

#include <limits>
#include <set>
#include <stdexcept>

#include "ltpal/error.hpp"

namespace ltpal {

namespace {

PalModel dummy_layer(const WorldId& id, const std::vector<AgentId>& agents) {
  return PalModel({World{id, {}}}, agents, {});
}

WorldId free_dummy_id(std::string preferred, std::string fallback, const std::set<WorldId>& taken) {
  if (!taken.contains(preferred)) return preferred;
  while (taken.contains(fallback)) fallback += "_";
  return fallback;
}

}  // namespace

TransitionSystem::TransitionSystem(std::vector<PalModel> layers,
                                   std::map<std::string, std::vector<AgentId>> groups)
    : layers_(std::move(layers)), groups_(std::move(groups)) {
  if (layers_.size() < 3) throw IngestError("a transition system needs at least one real layer");
  for (std::size_t i : {std::size_t{0}, layers_.size() - 1}) {
    const auto& d = layers_[i];
    if (d.size() != 1 || !d.world(0).atoms.empty())
      throw IngestError("layer " + std::to_string(i) + " must be a single world with an empty label");
  }
  const auto& roster = layers_.front().agents();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].empty()) throw IngestError("layer " + std::to_string(i) + " has no worlds");
    if (layers_[i].agents() != roster) throw IngestError("layer " + std::to_string(i) + " has a different agent roster");
    for (std::size_t w = 0; w < layers_[i].size(); ++w) {
      if (!index_.emplace(layers_[i].world(w).id, StateRef{i, w}).second)
        throw IngestError("world id '" + layers_[i].world(w).id + "' occurs in more than one layer");
    }
  }
  std::set<AgentId> known(roster.begin(), roster.end());
  for (const auto& [name, members] : groups_) {
    if (!is_valid_identifier(name)) throw IngestError("invalid group name '" + name + "'");
    if (members.empty()) throw IngestError("group '" + name + "' is empty");
    for (const auto& m : members) {
      if (!known.contains(m)) throw IngestError("group '" + name + "' names unknown agent '" + m + "'");
    }
  }
}

std::size_t TransitionSystem::state_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.size();
  return n;
}

std::uint64_t TransitionSystem::edge_count() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) n += std::uint64_t{layers_[i].size()} * layers_[i + 1].size();
  return n;
}

std::optional<std::uint64_t> TransitionSystem::total_path_count() const {
  std::uint64_t n = 1;
  for (const auto& l : layers_) {
    if (n > std::numeric_limits<std::uint64_t>::max() / l.size()) return std::nullopt;
    n *= l.size();
  }
  return n;
}

std::optional<StateRef> TransitionSystem::locate(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TransitionSystem build_ts(std::vector<PalModel> frames, std::map<std::string, std::vector<AgentId>> groups) {
  if (frames.empty()) throw IngestError("no frames given");
  const auto roster = frames.front().agents();
  std::set<WorldId> ids;
  bool collision = false;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].agents() != roster)
      throw IngestError("frame " + std::to_string(f) + " has a different agent roster");
    if (frames[f].empty()) throw IngestError("frame " + std::to_string(f) + " has no worlds");
    for (const auto& w : frames[f].worlds()) collision |= !ids.insert(w.id).second;
  }
  if (collision) {
    ids.clear();
    for (std::size_t f = 0; f < frames.size(); ++f) {
      std::vector<WorldId> renamed;
      for (const auto& w : frames[f].worlds()) renamed.push_back("L" + std::to_string(f + 1) + "_" + w.id);
      frames[f] = frames[f].with_world_ids(renamed);
      ids.insert(renamed.begin(), renamed.end());
    }
  }
  const std::size_t last = frames.size() + 1;
  WorldId first_id = free_dummy_id("w00", "s0", ids);
  ids.insert(first_id);
  WorldId last_id = free_dummy_id("w" + std::to_string(last) + "0", "s-1", ids);

  std::vector<PalModel> layers;
  layers.reserve(frames.size() + 2);
  layers.push_back(dummy_layer(first_id, roster));
  for (auto& f : frames) layers.push_back(std::move(f));
  layers.push_back(dummy_layer(last_id, roster));
  return TransitionSystem(std::move(layers), std::move(groups));
}

bool is_valid_path(const TransitionSystem& ts, const ExecPath& path) {
  if (path.first_layer + path.size() > ts.layer_count()) return false;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path.choices[k] >= ts.layer(path.first_layer + k).size()) return false;
  }
  return true;
}

bool is_total(const TransitionSystem& ts, const ExecPath& path) {
  return path.first_layer == 0 && path.size() == ts.layer_count() && is_valid_path(ts, path);
}

std::vector<WorldId> path_ids(const TransitionSystem& ts, const ExecPath& path) {
  std::vector<WorldId> out;
  out.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) out.push_back(ts.state(path.at(k)).id);
  return out;
}

ExecPath path_from_ids(const TransitionSystem& ts, const std::vector<WorldId>& ids) {
  ExecPath p;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto ref = ts.locate(ids[k]);
    if (!ref) throw EvalError("unknown world '" + ids[k] + "'");
    if (k == 0) {
      p.first_layer = ref->layer;
    } else if (ref->layer != p.first_layer + k) {
      throw EvalError("'" + ids[k - 1] + "' -> '" + ids[k] + "' is not a transition");
    }
    p.choices.push_back(ref->index);
  }
  return p;
}

ExecPath path_suffix(const ExecPath& path, std::size_t k) {
  if (k > path.size()) throw std::out_of_range("path suffix offset beyond path length");
  ExecPath out;
  out.first_layer = path.first_layer + k;
  out.choices.assign(path.choices.begin() + static_cast<std::ptrdiff_t>(k), path.choices.end());
  return out;
}

TotalPathEnumerator::TotalPathEnumerator(const TransitionSystem& ts) {
  for (const auto& l : ts.layers()) radix_.push_back(l.size());
  current_.choices.assign(radix_.size(), 0);
}

std::optional<ExecPath> TotalPathEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return current_;
  }
  for (std::size_t k = radix_.size(); k-- > 0;) {
    if (++current_.choices[k] < radix_[k]) return current_;
    current_.choices[k] = 0;
  }
  done_ = true;
  return std::nullopt;
}

ExecPath total_path_at(const TransitionSystem& ts, std::uint64_t rank) {
  ExecPath p;
  p.choices.assign(ts.layer_count(), 0);
  for (std::size_t k = ts.layer_count(); k-- > 0;) {
    std::uint64_t r = ts.layer(k).size();
    p.choices[k] = static_cast<std::size_t>(rank % r);
    rank /= r;
  }
  if (rank != 0) throw std::out_of_range("path rank beyond the number of total paths");
  return p;
}

}  // namespace ltpal
