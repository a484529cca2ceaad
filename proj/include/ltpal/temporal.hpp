#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ltpal/formula.hpp"
#include "ltpal/transition_system.hpp"

namespace ltpal {

/// Evaluates temporal formulas on finite execution paths of one system.
/// PAL leaves are evaluated in the layer model of the path position and
/// cached per (leaf, layer) for the evaluator's lifetime; one evaluator per
/// thread.
///
/// Finite-path semantics: every formula is false on the empty path, X on
/// the last position looks at the empty path, and (f U g) needs g at some
/// position m with f at every earlier position of the suffix.
class TemporalEvaluator {
 public:
  explicit TemporalEvaluator(const TransitionSystem& ts) : ts_(&ts) {}

  bool holds(const ExecPath& path, const TemporalFormula& phi);

  /// Truth value at every suffix offset 0..size-1 of the path.
  std::vector<bool> trace(const ExecPath& path, const TemporalFormula& phi);

 private:
  std::vector<bool> eval(const ExecPath& path, const TemporalFormula& phi);
  bool pal_at(const PalFormula& f, StateRef ref);

  struct CacheEntry {
    PalFormula formula;
    std::vector<std::optional<std::vector<bool>>> by_layer;
  };

  const TransitionSystem* ts_;
  std::map<const void*, CacheEntry> cache_;
};

/// TS, path |= phi.
bool tems(const TransitionSystem& ts, const ExecPath& path, const TemporalFormula& phi);

}  // namespace ltpal
