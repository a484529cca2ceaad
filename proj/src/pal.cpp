#include "ltpal/pal.hpp"

#include <algorithm>

#include "ltpal/error.hpp"

namespace ltpal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

/// Restricts the model to the worlds with keep[i] set.
PalModel restrict_to(const PalModel& model, const std::vector<bool>& keep) {
  std::vector<World> worlds;
  std::vector<std::size_t> new_index(model.size(), model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!keep[i]) continue;
    new_index[i] = worlds.size();
    worlds.push_back(model.world(i));
  }
  std::map<AgentId, Partition> parts;
  for (const auto& [agent, partition] : model.relations()) {
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& block : partition.blocks()) {
      std::vector<std::size_t> kept;
      for (std::size_t w : block) {
        if (keep[w]) kept.push_back(new_index[w]);
      }
      if (!kept.empty()) blocks.push_back(std::move(kept));
    }
    parts.emplace(agent, Partition(worlds.size(), std::move(blocks)));
  }
  return PalModel(std::move(worlds), model.agents(), std::move(parts));
}

void require_agents(const PalModel& model, const std::vector<AgentId>& group) {
  if (group.empty()) throw EvalError("distributed knowledge needs a non-empty group");
  for (const auto& a : group) {
    if (!model.has_agent(a)) throw EvalError("unknown agent '" + a + "'");
  }
}

// Worlds in R_A(w), by index; `group` must be validated.
std::vector<std::size_t> group_block_indices(const PalModel& model, const std::vector<AgentId>& group,
                                             std::size_t w) {
  auto first = model.relation(group.front()).block_of(w);
  std::vector<std::size_t> acc(first.begin(), first.end());
  for (std::size_t k = 1; k < group.size() && acc.size() > 1; ++k) {
    const auto& part = model.relation(group[k]);
    std::size_t blk = part.block_index(w);
    std::erase_if(acc, [&](std::size_t v) { return part.block_index(v) != blk; });
  }
  return acc;
}

std::vector<bool> extension(const PalModel& model, const PalFormula& phi) {
  const std::size_t n = model.size();
  return std::visit(
      overloaded{
          [&](const pal::Const& c) { return std::vector<bool>(n, c.value); },
          [&](const pal::Prop& p) {
            std::vector<bool> out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = model.world(i).atoms.contains(p.atom);
            return out;
          },
          [&](const pal::Slot& s) -> std::vector<bool> {
            throw EvalError("cannot evaluate unsubstituted placeholder $" + std::to_string(s.index));
          },
          [&](const pal::Not& x) {
            auto out = extension(model, x.sub);
            out.flip();
            return out;
          },
          [&](const pal::And& x) {
            auto out = extension(model, x.lhs);
            if (std::find(out.begin(), out.end(), true) == out.end()) return out;
            auto rhs = extension(model, x.rhs);
            for (std::size_t i = 0; i < n; ++i) out[i] = out[i] && rhs[i];
            return out;
          },
          [&](const pal::Knows& k) {
            const auto& part = model.relation(k.agent);
            auto sub = extension(model, k.sub);
            std::vector<bool> out(n);
            for (const auto& block : part.blocks()) {
              bool all = std::all_of(block.begin(), block.end(), [&](std::size_t v) { return sub[v]; });
              for (std::size_t v : block) out[v] = all;
            }
            return out;
          },
          [&](const pal::Dist& d) {
            require_agents(model, d.group);
            auto sub = extension(model, d.sub);
            std::vector<bool> out(n);
            for (std::size_t w = 0; w < n; ++w) {
              auto blk = group_block_indices(model, d.group, w);
              out[w] = std::all_of(blk.begin(), blk.end(), [&](std::size_t v) { return sub[v]; });
            }
            return out;
          },
          [&](const pal::Announce& a) {
            auto psi = extension(model, a.announcement);
            auto updated = restrict_to(model, psi);
            auto body = extension(updated, a.body);
            std::vector<bool> out(n);
            std::size_t j = 0;
            for (std::size_t i = 0; i < n; ++i) {
              out[i] = psi[i] ? body[j++] : true;
            }
            return out;
          },
      },
      phi.node().v);
}

}  // namespace

std::vector<bool> pal_extension(const PalModel& model, const PalFormula& phi) {
  // Checked up front: short-circuiting and empty updates may skip subtrees.
  if (auto s = slots(phi); !s.empty())
    throw EvalError("cannot evaluate unsubstituted placeholder $" + std::to_string(*s.begin()));
  for (const auto& agent : agents_of(phi)) {
    if (!model.has_agent(agent)) throw EvalError("unknown agent '" + agent + "'");
  }
  return extension(model, phi);
}

bool pal_sat(const PalModel& model, std::string_view world, const PalFormula& phi) {
  std::size_t w = model.require_index(world);
  return pal_extension(model, phi)[w];
}

PalModel announce_update(const PalModel& model, const PalFormula& psi) {
  return restrict_to(model, pal_extension(model, psi));
}

std::set<WorldId> group_block(const PalModel& model, const std::vector<AgentId>& group,
                              std::string_view world) {
  require_agents(model, group);
  std::size_t w = model.require_index(world);
  std::set<WorldId> out;
  for (std::size_t v : group_block_indices(model, group, w)) out.insert(model.world(v).id);
  return out;
}

}  // namespace ltpal
