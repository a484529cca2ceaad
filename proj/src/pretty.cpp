#include <optional>

#include "ltpal/parser.hpp"

namespace ltpal {

namespace {

// Binding strength; a subterm printed in a tighter context gets parentheses.
enum Level { kImplies = 0, kOr = 1, kAnd = 2, kPrefix = 3 };

std::string paren_if(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

bool reserved_word(std::string_view w) {
  return w == "X" || w == "F" || w == "G" || w == "U" || w == "R" || w == "W" || w == "K" || w == "D" ||
         w == "true" || w == "false";
}

const PalFormula* pal_negand(const PalFormula& f) {
  if (const auto* n = std::get_if<pal::Not>(&f.node().v)) return &n->sub;
  return nullptr;
}

bool is_const(const PalFormula& f, bool value) {
  const auto* c = std::get_if<pal::Const>(&f.node().v);
  return c && c->value == value;
}

std::string print(const PalFormula& f, int ctx);

std::string print_group(const std::vector<AgentId>& group) {
  std::string s;
  for (const auto& a : group) s += (s.empty() ? "" : ",") + a;
  return s;
}

std::string print(const PalFormula& f, int ctx) {
  const auto& v = f.node().v;
  if (const auto* c = std::get_if<pal::Const>(&v)) return c->value ? "true" : "false";
  if (const auto* p = std::get_if<pal::Prop>(&v)) return pretty(p->atom);
  if (const auto* s = std::get_if<pal::Slot>(&v)) return "$" + std::to_string(s->index);
  if (const auto* n = std::get_if<pal::Not>(&v)) {
    if (const auto* a = std::get_if<pal::And>(&n->sub.node().v)) {
      const auto* l = pal_negand(a->lhs);
      const auto* r = pal_negand(a->rhs);
      if (l && r) return paren_if(ctx > kOr, print(*l, kOr) + " | " + print(*r, kAnd));
      if (r) return paren_if(ctx > kImplies, print(a->lhs, kOr) + " -> " + print(*r, kImplies));
    }
    return "!" + print(n->sub, kPrefix);
  }
  if (const auto* a = std::get_if<pal::And>(&v))
    return paren_if(ctx > kAnd, print(a->lhs, kAnd) + " & " + print(a->rhs, kPrefix));
  if (const auto* k = std::get_if<pal::Knows>(&v)) return "K{" + k->agent + "} " + print(k->sub, kPrefix);
  if (const auto* d = std::get_if<pal::Dist>(&v)) return "D{" + print_group(d->group) + "} " + print(d->sub, kPrefix);
  const auto& an = std::get<pal::Announce>(v);
  return "[" + print(an.announcement, kImplies) + "] " + print(an.body, kPrefix);
}

// f such that tnot(f) reproduces `g`, if any.
std::optional<TemporalFormula> negand(const TemporalFormula& g) {
  if (const auto* n = std::get_if<tl::Not>(&g.node().v)) return n->sub;
  if (const auto* p = g.as_pal()) {
    if (const auto* inner = pal_negand(*p)) return leaf(*inner);
  }
  return std::nullopt;
}

std::string print(const TemporalFormula& f, int ctx) {
  const auto& v = f.node().v;
  if (const auto* l = std::get_if<tl::Leaf>(&v)) return print(l->pal, ctx);
  if (const auto* n = std::get_if<tl::Not>(&v)) {
    if (const auto* u = std::get_if<tl::Until>(&n->sub.node().v)) {
      // G g == !(!false U !g)
      const auto* lhs = u->lhs.as_pal();
      const auto* inner = lhs ? pal_negand(*lhs) : nullptr;
      if (inner && is_const(*inner, false)) {
        if (auto g = negand(u->rhs)) return "G " + print(*g, kPrefix);
      }
    }
    if (const auto* a = std::get_if<tl::And>(&n->sub.node().v)) {
      auto l = negand(a->lhs);
      auto r = negand(a->rhs);
      if (l && r) return paren_if(ctx > kOr, print(*l, kOr) + " | " + print(*r, kAnd));
      if (r) return paren_if(ctx > kImplies, print(a->lhs, kOr) + " -> " + print(*r, kImplies));
    }
    return "!" + print(n->sub, kPrefix);
  }
  if (const auto* a = std::get_if<tl::And>(&v))
    return paren_if(ctx > kAnd, print(a->lhs, kAnd) + " & " + print(a->rhs, kPrefix));
  if (const auto* x = std::get_if<tl::Next>(&v)) return "X " + print(x->sub, kPrefix);
  const auto& u = std::get<tl::Until>(v);
  if (const auto* lhs = u.lhs.as_pal(); lhs && is_const(*lhs, true)) return "F " + print(u.rhs, kPrefix);
  return "(" + print(u.lhs, kImplies) + " U " + print(u.rhs, kImplies) + ")";
}

}  // namespace

std::string pretty(const Atom& a) {
  if (a.data_id == a.class_id && !reserved_word(a.data_id)) return a.data_id;
  return a.data_id + ":" + a.class_id;
}

std::string pretty(const PalFormula& f) { return print(f, kImplies); }
std::string pretty(const TemporalFormula& f) { return print(f, kImplies); }

}  // namespace ltpal
