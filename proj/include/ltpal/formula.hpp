#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ltpal/model.hpp"

namespace ltpal {

// Two-level formula AST. PAL formulas (atoms, negation, conjunction,
// individual/distributed knowledge, announcement) sit at the leaves of
// temporal formulas (negation, conjunction, next, until). Both are
// immutable, shared, and compare structurally.

class PalFormula {
 public:
  struct Node;

  const Node& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const PalFormula& a, const PalFormula& b);

  explicit PalFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

namespace pal {
struct Const { bool value; };
struct Prop { Atom atom; };
/// Template placeholder p_k (1-based); never evaluated directly.
struct Slot { int index; };
struct Not { PalFormula sub; };
struct And { PalFormula lhs, rhs; };
struct Knows { AgentId agent; PalFormula sub; };
/// `group` is sorted and duplicate-free, never empty.
struct Dist { std::vector<AgentId> group; PalFormula sub; };
struct Announce { PalFormula announcement; PalFormula body; };
}  // namespace pal

struct PalFormula::Node {
  std::variant<pal::Const, pal::Prop, pal::Slot, pal::Not, pal::And, pal::Knows, pal::Dist,
               pal::Announce>
      v;
};

class TemporalFormula {
 public:
  struct Node;

  const Node& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  /// The embedded PAL formula when this is a pure PAL leaf.
  const PalFormula* as_pal() const;

  friend bool operator==(const TemporalFormula& a, const TemporalFormula& b);

  explicit TemporalFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

namespace tl {
struct Leaf { PalFormula pal; };
struct Not { TemporalFormula sub; };
struct And { TemporalFormula lhs, rhs; };
struct Next { TemporalFormula sub; };
struct Until { TemporalFormula lhs, rhs; };
}  // namespace tl

struct TemporalFormula::Node {
  std::variant<tl::Leaf, tl::Not, tl::And, tl::Next, tl::Until> v;
};

// PAL constructors. Or/Implies desugar to Not/And.
PalFormula top();
PalFormula bottom();
PalFormula prop(Atom atom);
PalFormula prop(std::string data_id, std::string class_id);
PalFormula slot(int index);
PalFormula lnot(PalFormula f);
PalFormula land(PalFormula a, PalFormula b);
PalFormula lor(PalFormula a, PalFormula b);        // !(!a & !b)
PalFormula limplies(PalFormula a, PalFormula b);   // !(a & !b)
PalFormula knows(AgentId agent, PalFormula f);
PalFormula dist(std::vector<AgentId> group, PalFormula f);
PalFormula announce(PalFormula announcement, PalFormula body);

// Temporal constructors. Negation and conjunction over pure PAL operands
// stay in the PAL layer, so every formula has one canonical shape.
TemporalFormula leaf(PalFormula f);
TemporalFormula tnot(TemporalFormula f);
TemporalFormula tand(TemporalFormula a, TemporalFormula b);
TemporalFormula tor(TemporalFormula a, TemporalFormula b);
TemporalFormula timplies(TemporalFormula a, TemporalFormula b);
TemporalFormula next(TemporalFormula f);
TemporalFormula until(TemporalFormula a, TemporalFormula b);

// Derived temporal operators, expanded to the X/U core:
//   F f     = (true U f)
//   f R g   = !(!f U !g)
//   f W g   = g R (f | g)
//   G f     = false R f
TemporalFormula eventually(TemporalFormula f);
TemporalFormula release(TemporalFormula a, TemporalFormula b);
TemporalFormula weak_until(TemporalFormula a, TemporalFormula b);
TemporalFormula globally(TemporalFormula f);

/// Number of nested operators (a leaf atom has depth 0).
int depth(const PalFormula& f);
int depth(const TemporalFormula& f);

/// Placeholder indices occurring in the formula.
std::set<int> slots(const PalFormula& f);
std::set<int> slots(const TemporalFormula& f);

/// Agent ids mentioned by K/D operators.
std::set<AgentId> agents_of(const PalFormula& f);
std::set<AgentId> agents_of(const TemporalFormula& f);

/// Replaces every placeholder k by args[k-1]. Throws EvalError on a
/// placeholder outside 1..args.size().
PalFormula substitute_slots(const PalFormula& f, std::span<const PalFormula> args);
TemporalFormula substitute_slots(const TemporalFormula& f, std::span<const PalFormula> args);

/// Rewrites each agent in a D{...} group that names a group alias into the
/// alias's members.
PalFormula expand_groups(const PalFormula& f, const std::map<std::string, std::vector<AgentId>>& groups);
TemporalFormula expand_groups(const TemporalFormula& f,
                              const std::map<std::string, std::vector<AgentId>>& groups);

}  // namespace ltpal
