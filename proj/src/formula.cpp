#include "ltpal/formula.hpp"

#include <algorithm>

#include "ltpal/error.hpp"

namespace ltpal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

PalFormula make_pal(PalFormula::Node n) {
  return PalFormula(std::make_shared<const PalFormula::Node>(std::move(n)));
}

TemporalFormula make_tl(TemporalFormula::Node n) {
  return TemporalFormula(std::make_shared<const TemporalFormula::Node>(std::move(n)));
}

}  // namespace

bool operator==(const PalFormula& a, const PalFormula& b) {
  if (a.identity() == b.identity()) return true;
  const auto& x = a.node().v;
  const auto& y = b.node().v;
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [&](const pal::Const& l) { return l.value == std::get<pal::Const>(y).value; },
          [&](const pal::Prop& l) { return l.atom == std::get<pal::Prop>(y).atom; },
          [&](const pal::Slot& l) { return l.index == std::get<pal::Slot>(y).index; },
          [&](const pal::Not& l) { return l.sub == std::get<pal::Not>(y).sub; },
          [&](const pal::And& l) {
            const auto& r = std::get<pal::And>(y);
            return l.lhs == r.lhs && l.rhs == r.rhs;
          },
          [&](const pal::Knows& l) {
            const auto& r = std::get<pal::Knows>(y);
            return l.agent == r.agent && l.sub == r.sub;
          },
          [&](const pal::Dist& l) {
            const auto& r = std::get<pal::Dist>(y);
            return l.group == r.group && l.sub == r.sub;
          },
          [&](const pal::Announce& l) {
            const auto& r = std::get<pal::Announce>(y);
            return l.announcement == r.announcement && l.body == r.body;
          },
      },
      x);
}

bool operator==(const TemporalFormula& a, const TemporalFormula& b) {
  if (a.identity() == b.identity()) return true;
  const auto& x = a.node().v;
  const auto& y = b.node().v;
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [&](const tl::Leaf& l) { return l.pal == std::get<tl::Leaf>(y).pal; },
          [&](const tl::Not& l) { return l.sub == std::get<tl::Not>(y).sub; },
          [&](const tl::And& l) {
            const auto& r = std::get<tl::And>(y);
            return l.lhs == r.lhs && l.rhs == r.rhs;
          },
          [&](const tl::Next& l) { return l.sub == std::get<tl::Next>(y).sub; },
          [&](const tl::Until& l) {
            const auto& r = std::get<tl::Until>(y);
            return l.lhs == r.lhs && l.rhs == r.rhs;
          },
      },
      x);
}

const PalFormula* TemporalFormula::as_pal() const {
  if (const auto* l = std::get_if<tl::Leaf>(&node_->v)) return &l->pal;
  return nullptr;
}

PalFormula top() { return make_pal({pal::Const{true}}); }
PalFormula bottom() { return make_pal({pal::Const{false}}); }
PalFormula prop(Atom atom) { return make_pal({pal::Prop{std::move(atom)}}); }
PalFormula prop(std::string data_id, std::string class_id) {
  return prop(Atom(std::move(data_id), std::move(class_id)));
}

PalFormula slot(int index) {
  if (index < 1) throw EvalError("placeholder index must be positive");
  return make_pal({pal::Slot{index}});
}

PalFormula lnot(PalFormula f) { return make_pal({pal::Not{std::move(f)}}); }
PalFormula land(PalFormula a, PalFormula b) { return make_pal({pal::And{std::move(a), std::move(b)}}); }
PalFormula lor(PalFormula a, PalFormula b) { return lnot(land(lnot(std::move(a)), lnot(std::move(b)))); }
PalFormula limplies(PalFormula a, PalFormula b) { return lnot(land(std::move(a), lnot(std::move(b)))); }

PalFormula knows(AgentId agent, PalFormula f) {
  if (!is_valid_identifier(agent)) throw EvalError("invalid agent id '" + agent + "'");
  return make_pal({pal::Knows{std::move(agent), std::move(f)}});
}

PalFormula dist(std::vector<AgentId> group, PalFormula f) {
  if (group.empty()) throw EvalError("distributed knowledge needs a non-empty group");
  for (const auto& a : group) {
    if (!is_valid_identifier(a)) throw EvalError("invalid agent id '" + a + "'");
  }
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  return make_pal({pal::Dist{std::move(group), std::move(f)}});
}

PalFormula announce(PalFormula announcement, PalFormula body) {
  return make_pal({pal::Announce{std::move(announcement), std::move(body)}});
}

TemporalFormula leaf(PalFormula f) { return make_tl({tl::Leaf{std::move(f)}}); }

TemporalFormula tnot(TemporalFormula f) {
  if (const auto* p = f.as_pal()) return leaf(lnot(*p));
  return make_tl({tl::Not{std::move(f)}});
}

TemporalFormula tand(TemporalFormula a, TemporalFormula b) {
  const auto* pa = a.as_pal();
  const auto* pb = b.as_pal();
  if (pa && pb) return leaf(land(*pa, *pb));
  return make_tl({tl::And{std::move(a), std::move(b)}});
}

TemporalFormula tor(TemporalFormula a, TemporalFormula b) {
  return tnot(tand(tnot(std::move(a)), tnot(std::move(b))));
}

TemporalFormula timplies(TemporalFormula a, TemporalFormula b) {
  return tnot(tand(std::move(a), tnot(std::move(b))));
}

TemporalFormula next(TemporalFormula f) { return make_tl({tl::Next{std::move(f)}}); }

TemporalFormula until(TemporalFormula a, TemporalFormula b) {
  return make_tl({tl::Until{std::move(a), std::move(b)}});
}

TemporalFormula eventually(TemporalFormula f) { return until(leaf(top()), std::move(f)); }

TemporalFormula release(TemporalFormula a, TemporalFormula b) {
  return tnot(until(tnot(std::move(a)), tnot(std::move(b))));
}

TemporalFormula weak_until(TemporalFormula a, TemporalFormula b) {
  auto either = tor(a, b);
  return release(std::move(b), std::move(either));
}

TemporalFormula globally(TemporalFormula f) { return release(leaf(bottom()), std::move(f)); }

int depth(const PalFormula& f) {
  return std::visit(overloaded{
                        [](const pal::Const&) { return 0; },
                        [](const pal::Prop&) { return 0; },
                        [](const pal::Slot&) { return 0; },
                        [](const pal::Not& n) { return 1 + depth(n.sub); },
                        [](const pal::And& n) { return 1 + std::max(depth(n.lhs), depth(n.rhs)); },
                        [](const pal::Knows& n) { return 1 + depth(n.sub); },
                        [](const pal::Dist& n) { return 1 + depth(n.sub); },
                        [](const pal::Announce& n) {
                          return 1 + std::max(depth(n.announcement), depth(n.body));
                        },
                    },
                    f.node().v);
}

int depth(const TemporalFormula& f) {
  return std::visit(overloaded{
                        [](const tl::Leaf& n) { return depth(n.pal); },
                        [](const tl::Not& n) { return 1 + depth(n.sub); },
                        [](const tl::And& n) { return 1 + std::max(depth(n.lhs), depth(n.rhs)); },
                        [](const tl::Next& n) { return 1 + depth(n.sub); },
                        [](const tl::Until& n) { return 1 + std::max(depth(n.lhs), depth(n.rhs)); },
                    },
                    f.node().v);
}

namespace {

void collect_slots(const PalFormula& f, std::set<int>& out) {
  std::visit(overloaded{
                 [](const pal::Const&) {},
                 [](const pal::Prop&) {},
                 [&](const pal::Slot& n) { out.insert(n.index); },
                 [&](const pal::Not& n) { collect_slots(n.sub, out); },
                 [&](const pal::And& n) {
                   collect_slots(n.lhs, out);
                   collect_slots(n.rhs, out);
                 },
                 [&](const pal::Knows& n) { collect_slots(n.sub, out); },
                 [&](const pal::Dist& n) { collect_slots(n.sub, out); },
                 [&](const pal::Announce& n) {
                   collect_slots(n.announcement, out);
                   collect_slots(n.body, out);
                 },
             },
             f.node().v);
}

void collect_slots(const TemporalFormula& f, std::set<int>& out) {
  std::visit(overloaded{
                 [&](const tl::Leaf& n) { collect_slots(n.pal, out); },
                 [&](const tl::Not& n) { collect_slots(n.sub, out); },
                 [&](const tl::And& n) {
                   collect_slots(n.lhs, out);
                   collect_slots(n.rhs, out);
                 },
                 [&](const tl::Next& n) { collect_slots(n.sub, out); },
                 [&](const tl::Until& n) {
                   collect_slots(n.lhs, out);
                   collect_slots(n.rhs, out);
                 },
             },
             f.node().v);
}

void collect_agents(const PalFormula& f, std::set<AgentId>& out) {
  std::visit(overloaded{
                 [](const pal::Const&) {},
                 [](const pal::Prop&) {},
                 [](const pal::Slot&) {},
                 [&](const pal::Not& n) { collect_agents(n.sub, out); },
                 [&](const pal::And& n) {
                   collect_agents(n.lhs, out);
                   collect_agents(n.rhs, out);
                 },
                 [&](const pal::Knows& n) {
                   out.insert(n.agent);
                   collect_agents(n.sub, out);
                 },
                 [&](const pal::Dist& n) {
                   out.insert(n.group.begin(), n.group.end());
                   collect_agents(n.sub, out);
                 },
                 [&](const pal::Announce& n) {
                   collect_agents(n.announcement, out);
                   collect_agents(n.body, out);
                 },
             },
             f.node().v);
}

void collect_agents(const TemporalFormula& f, std::set<AgentId>& out) {
  std::visit(overloaded{
                 [&](const tl::Leaf& n) { collect_agents(n.pal, out); },
                 [&](const tl::Not& n) { collect_agents(n.sub, out); },
                 [&](const tl::And& n) {
                   collect_agents(n.lhs, out);
                   collect_agents(n.rhs, out);
                 },
                 [&](const tl::Next& n) { collect_agents(n.sub, out); },
                 [&](const tl::Until& n) {
                   collect_agents(n.lhs, out);
                   collect_agents(n.rhs, out);
                 },
             },
             f.node().v);
}

// Generic bottom-up rewrite of PAL leaves; `fn` maps a node to a
// replacement or returns nullopt to recurse structurally.
template <class Fn>
PalFormula rewrite(const PalFormula& f, Fn& fn) {
  if (auto r = fn(f)) return *r;
  return std::visit(overloaded{
                        [&](const pal::Const&) { return f; },
                        [&](const pal::Prop&) { return f; },
                        [&](const pal::Slot&) { return f; },
                        [&](const pal::Not& n) { return lnot(rewrite(n.sub, fn)); },
                        [&](const pal::And& n) { return land(rewrite(n.lhs, fn), rewrite(n.rhs, fn)); },
                        [&](const pal::Knows& n) { return knows(n.agent, rewrite(n.sub, fn)); },
                        [&](const pal::Dist& n) { return dist(n.group, rewrite(n.sub, fn)); },
                        [&](const pal::Announce& n) {
                          return announce(rewrite(n.announcement, fn), rewrite(n.body, fn));
                        },
                    },
                    f.node().v);
}

// Rebuilds the temporal skeleton with raw nodes; leaves stay leaves, so
// the canonical shape of the input is preserved.
template <class Fn>
TemporalFormula rewrite(const TemporalFormula& f, Fn& fn) {
  return std::visit(
      overloaded{
          [&](const tl::Leaf& n) { return make_tl({tl::Leaf{rewrite(n.pal, fn)}}); },
          [&](const tl::Not& n) { return make_tl({tl::Not{rewrite(n.sub, fn)}}); },
          [&](const tl::And& n) { return make_tl({tl::And{rewrite(n.lhs, fn), rewrite(n.rhs, fn)}}); },
          [&](const tl::Next& n) { return make_tl({tl::Next{rewrite(n.sub, fn)}}); },
          [&](const tl::Until& n) { return make_tl({tl::Until{rewrite(n.lhs, fn), rewrite(n.rhs, fn)}}); },
      },
      f.node().v);
}

struct SlotFiller {
  std::span<const PalFormula> args;
  std::optional<PalFormula> operator()(const PalFormula& f) const {
    if (const auto* s = std::get_if<pal::Slot>(&f.node().v)) {
      if (s->index < 1 || static_cast<std::size_t>(s->index) > args.size())
        throw EvalError("placeholder $" + std::to_string(s->index) + " has no argument");
      return args[static_cast<std::size_t>(s->index - 1)];
    }
    return std::nullopt;
  }
};

struct GroupExpander {
  const std::map<std::string, std::vector<AgentId>>& groups;
  std::optional<PalFormula> operator()(const PalFormula& f) {
    const auto* d = std::get_if<pal::Dist>(&f.node().v);
    if (!d) return std::nullopt;
    std::vector<AgentId> members;
    for (const auto& a : d->group) {
      auto it = groups.find(a);
      if (it == groups.end()) {
        members.push_back(a);
      } else {
        members.insert(members.end(), it->second.begin(), it->second.end());
      }
    }
    return dist(std::move(members), rewrite(d->sub, *this));
  }
};

}  // namespace

std::set<int> slots(const PalFormula& f) {
  std::set<int> out;
  collect_slots(f, out);
  return out;
}

std::set<int> slots(const TemporalFormula& f) {
  std::set<int> out;
  collect_slots(f, out);
  return out;
}

std::set<AgentId> agents_of(const PalFormula& f) {
  std::set<AgentId> out;
  collect_agents(f, out);
  return out;
}

std::set<AgentId> agents_of(const TemporalFormula& f) {
  std::set<AgentId> out;
  collect_agents(f, out);
  return out;
}

PalFormula substitute_slots(const PalFormula& f, std::span<const PalFormula> args) {
  SlotFiller fill{args};
  return rewrite(f, fill);
}

TemporalFormula substitute_slots(const TemporalFormula& f, std::span<const PalFormula> args) {
  SlotFiller fill{args};
  return rewrite(f, fill);
}

PalFormula expand_groups(const PalFormula& f, const std::map<std::string, std::vector<AgentId>>& groups) {
  if (groups.empty()) return f;
  GroupExpander ex{groups};
  return rewrite(f, ex);
}

TemporalFormula expand_groups(const TemporalFormula& f,
                              const std::map<std::string, std::vector<AgentId>>& groups) {
  if (groups.empty()) return f;
  GroupExpander ex{groups};
  return rewrite(f, ex);
}

}  // namespace ltpal
