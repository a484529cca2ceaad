#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ltpal/formula.hpp"
#include "ltpal/transition_system.hpp"

namespace ltpal {

inline constexpr std::uint64_t kDefaultPathCap = 1'000'000;

/// Temporal skeleton Phi(p_1, ..., p_sigma) with placeholders $1..$sigma.
class Template {
 public:
  /// Arity is the largest placeholder index; every index 1..arity must occur.
  explicit Template(TemporalFormula skeleton);
  Template(TemporalFormula skeleton, int arity);

  const TemporalFormula& skeleton() const { return skeleton_; }
  int arity() const { return arity_; }

 private:
  TemporalFormula skeleton_;
  int arity_;
};

/// Phi(phi_1, ..., phi_sigma). Throws EvalError unless args.size() == arity.
TemporalFormula substitute(const Template& tmpl, std::span<const PalFormula> args);

enum class Quantifier { All, Exists };

struct CheckOptions {
  std::uint64_t cap = kDefaultPathCap;
  /// Evaluate each total path from its first real layer.
  bool skip_dummies = false;
  unsigned jobs = 1;
  /// Restrict quantification to this single total path (e.g. the most
  /// probable one) instead of every total path.
  std::optional<ExecPath> only_path;
};

struct CheckResult {
  Quantifier quantifier = Quantifier::All;
  /// nullopt when the cap was hit before the answer was known.
  std::optional<bool> result;
  /// Witness (Exists, true) or counterexample (All, false); always the
  /// least such total path in enumeration order.
  std::optional<ExecPath> path;
  /// Paths examined in enumeration order up to the decision.
  std::uint64_t paths_checked = 0;
  bool capped = false;
};

/// Quantifies tems(path, phi) over the total paths of the system.
CheckResult check_paths(const TransitionSystem& ts, const TemporalFormula& phi, Quantifier q,
                        const CheckOptions& options = {});

/// Perspective of a verdict: a group of classifiers (D_A) or one agent (K_i).
struct GroupScope {
  std::vector<AgentId> group;
};
struct AgentScope {
  AgentId agent;
};
using Scope = std::variant<GroupScope, AgentScope>;

/// D_A p / K_i p, or the "possible" forms !D_A !p / !K_i !p.
PalFormula wrap(const Scope& scope, bool possible, PalFormula p);

/// Phi(wrap(p_1), ..., wrap(p_sigma)).
TemporalFormula wrapped_formula(const Template& tmpl, std::span<const PalFormula> args, const Scope& scope,
                                bool possible);

/// For all total paths: Phi(D_A p_1, ..., D_A p_sigma).
CheckResult check_verified_group(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const std::vector<AgentId>& group, const CheckOptions& options = {});
/// Some total path: Phi(!D_A !p_1, ...).
CheckResult check_possible_group(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const std::vector<AgentId>& group, const CheckOptions& options = {});
/// For all total paths: Phi(K_i p_1, ...).
CheckResult check_robust_agent(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                               const AgentId& agent, const CheckOptions& options = {});
/// Some total path: Phi(!K_i !p_1, ...).
CheckResult check_possible_agent(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const AgentId& agent, const CheckOptions& options = {});

/// Same four verdicts over arbitrary PAL arguments instead of atoms.
CheckResult check_verdict(const TransitionSystem& ts, const Template& tmpl, std::span<const PalFormula> args,
                          const Scope& scope, bool possible, const CheckOptions& options = {});

enum class MissingMode { Verified, Possible };

struct CandidateOutcome {
  PalFormula candidate;
  CheckResult check;
  /// nullopt when the cap left the candidate undecided.
  std::optional<bool> qualifies;
};

struct MissingInfoReport {
  /// The unannounced check: universal over the wrapped formula (verified)
  /// or existential over the possible form (possible).
  CheckResult base;
  /// Verified: some path fails. Possible: no path satisfies.
  std::optional<bool> base_fails;
  std::vector<CandidateOutcome> candidates;

  std::vector<PalFormula> qualifying() const;
  bool undecided() const;
};

/// Verified-/possible-missing information among the given candidates:
/// psi qualifies when the base check fails as required and
/// Phi([psi] wrap(p_1), ...) holds on all paths (verified) or some path
/// (possible). Throws EvalError on an empty candidate list.
MissingInfoReport check_missing_info(const TransitionSystem& ts, const Template& tmpl,
                                     std::span<const PalFormula> args, const Scope& scope, MissingMode mode,
                                     std::span<const PalFormula> candidates, const CheckOptions& options = {});

}  // namespace ltpal
