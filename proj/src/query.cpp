#include "ltpal/query.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "ltpal/error.hpp"
#include "ltpal/temporal.hpp"

namespace ltpal {

namespace {

int max_slot(const TemporalFormula& f) {
  auto s = slots(f);
  return s.empty() ? 0 : *s.rbegin();
}

// Odometer step in enumeration order; false once it wraps around.
bool advance(const TransitionSystem& ts, ExecPath& p) {
  for (std::size_t k = p.size(); k-- > 0;) {
    if (++p.choices[k] < ts.layer(k).size()) return true;
    p.choices[k] = 0;
  }
  return false;
}

class PathJudge {
 public:
  PathJudge(const TransitionSystem& ts, const TemporalFormula& phi, Quantifier q, bool skip_dummies)
      : eval_(ts), phi_(phi), q_(q), skip_(skip_dummies) {}

  /// True when the path decides the check: a counterexample for All, a
  /// witness for Exists.
  bool decisive(const ExecPath& total) {
    bool sat = skip_ ? eval_.holds(path_suffix(total, 1), phi_) : eval_.holds(total, phi_);
    return q_ == Quantifier::All ? !sat : sat;
  }

 private:
  TemporalEvaluator eval_;
  const TemporalFormula& phi_;
  Quantifier q_;
  bool skip_;
};

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

// Least decisive rank below `limit`, or kNone.
std::uint64_t search_sequential(const TransitionSystem& ts, const TemporalFormula& phi, Quantifier q,
                                bool skip, std::uint64_t limit) {
  PathJudge judge(ts, phi, q, skip);
  TotalPathEnumerator paths(ts);
  for (std::uint64_t rank = 0; rank < limit; ++rank) {
    auto p = paths.next();
    if (!p) break;
    if (judge.decisive(*p)) return rank;
  }
  return kNone;
}

std::uint64_t search_parallel(const TransitionSystem& ts, const TemporalFormula& phi, Quantifier q, bool skip,
                              std::uint64_t limit, unsigned jobs) {
  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      PathJudge judge(ts, phi, q, skip);
      for (;;) {
        std::uint64_t start = next_chunk.fetch_add(kChunk);
        if (start >= limit || start >= best.load() || failed.load()) return;
        std::uint64_t end = std::min(limit, start + kChunk);
        ExecPath p = total_path_at(ts, start);
        for (std::uint64_t rank = start; rank < end; ++rank) {
          if (rank >= best.load()) break;
          if (judge.decisive(p)) {
            std::uint64_t cur = best.load();
            while (rank < cur && !best.compare_exchange_weak(cur, rank)) {
            }
            break;
          }
          advance(ts, p);
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return best.load();
}

}  // namespace

Template::Template(TemporalFormula skeleton) : Template(skeleton, max_slot(skeleton)) {}

Template::Template(TemporalFormula skeleton, int arity) : skeleton_(std::move(skeleton)), arity_(arity) {
  auto used = slots(skeleton_);
  for (int k = 1; k <= arity_; ++k) {
    if (!used.contains(k)) throw EvalError("template does not use placeholder $" + std::to_string(k));
  }
  if (!used.empty() && *used.rbegin() > arity_)
    throw EvalError("template placeholder $" + std::to_string(*used.rbegin()) + " exceeds its arity");
}

TemporalFormula substitute(const Template& tmpl, std::span<const PalFormula> args) {
  if (args.size() != static_cast<std::size_t>(tmpl.arity()))
    throw EvalError("template expects " + std::to_string(tmpl.arity()) + " arguments, got " +
                    std::to_string(args.size()));
  return substitute_slots(tmpl.skeleton(), args);
}

CheckResult check_paths(const TransitionSystem& ts, const TemporalFormula& phi, Quantifier q,
                        const CheckOptions& options) {
  CheckResult out;
  out.quantifier = q;

  if (options.only_path) {
    if (!is_total(ts, *options.only_path)) throw EvalError("restricted check needs a total path");
    PathJudge judge(ts, phi, q, options.skip_dummies);
    bool hit = judge.decisive(*options.only_path);
    out.paths_checked = 1;
    out.result = q == Quantifier::All ? !hit : hit;
    if (hit) out.path = options.only_path;
    return out;
  }

  auto total = ts.total_path_count();
  std::uint64_t limit = total ? std::min(*total, options.cap) : options.cap;
  bool truncated = !total || *total > options.cap;

  std::uint64_t rank = options.jobs > 1 && limit > 1
                           ? search_parallel(ts, phi, q, options.skip_dummies, limit, options.jobs)
                           : search_sequential(ts, phi, q, options.skip_dummies, limit);
  if (rank != kNone) {
    out.result = q == Quantifier::Exists;
    out.path = total_path_at(ts, rank);
    out.paths_checked = rank + 1;
  } else if (truncated) {
    out.capped = true;
    out.paths_checked = limit;
  } else {
    out.result = q == Quantifier::All;
    out.paths_checked = limit;
  }
  return out;
}

PalFormula wrap(const Scope& scope, bool possible, PalFormula p) {
  auto modal = [&](PalFormula f) {
    if (const auto* g = std::get_if<GroupScope>(&scope)) return dist(g->group, std::move(f));
    return knows(std::get<AgentScope>(scope).agent, std::move(f));
  };
  if (possible) return lnot(modal(lnot(std::move(p))));
  return modal(std::move(p));
}

TemporalFormula wrapped_formula(const Template& tmpl, std::span<const PalFormula> args, const Scope& scope,
                                bool possible) {
  std::vector<PalFormula> wrapped;
  wrapped.reserve(args.size());
  for (const auto& a : args) wrapped.push_back(wrap(scope, possible, a));
  return substitute(tmpl, wrapped);
}

CheckResult check_verdict(const TransitionSystem& ts, const Template& tmpl, std::span<const PalFormula> args,
                          const Scope& scope, bool possible, const CheckOptions& options) {
  return check_paths(ts, wrapped_formula(tmpl, args, scope, possible),
                     possible ? Quantifier::Exists : Quantifier::All, options);
}

namespace {

std::vector<PalFormula> props(std::span<const Atom> atoms) {
  std::vector<PalFormula> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(prop(a));
  return out;
}

}  // namespace

CheckResult check_verified_group(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const std::vector<AgentId>& group, const CheckOptions& options) {
  return check_verdict(ts, tmpl, props(atoms), GroupScope{group}, false, options);
}

CheckResult check_possible_group(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const std::vector<AgentId>& group, const CheckOptions& options) {
  return check_verdict(ts, tmpl, props(atoms), GroupScope{group}, true, options);
}

CheckResult check_robust_agent(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                               const AgentId& agent, const CheckOptions& options) {
  return check_verdict(ts, tmpl, props(atoms), AgentScope{agent}, false, options);
}

CheckResult check_possible_agent(const TransitionSystem& ts, const Template& tmpl, std::span<const Atom> atoms,
                                 const AgentId& agent, const CheckOptions& options) {
  return check_verdict(ts, tmpl, props(atoms), AgentScope{agent}, true, options);
}

std::vector<PalFormula> MissingInfoReport::qualifying() const {
  std::vector<PalFormula> out;
  for (const auto& c : candidates) {
    if (c.qualifies.value_or(false)) out.push_back(c.candidate);
  }
  return out;
}

bool MissingInfoReport::undecided() const {
  if (!base_fails) return true;
  return std::any_of(candidates.begin(), candidates.end(), [](const auto& c) { return !c.qualifies; });
}

MissingInfoReport check_missing_info(const TransitionSystem& ts, const Template& tmpl,
                                     std::span<const PalFormula> args, const Scope& scope, MissingMode mode,
                                     std::span<const PalFormula> candidates, const CheckOptions& options) {
  if (candidates.empty()) throw EvalError("missing-information check needs at least one candidate");
  const bool possible = mode == MissingMode::Possible;
  const Quantifier q = possible ? Quantifier::Exists : Quantifier::All;

  MissingInfoReport report;
  report.base = check_verdict(ts, tmpl, args, scope, possible, options);
  if (report.base.result) report.base_fails = !*report.base.result;

  for (const auto& psi : candidates) {
    CandidateOutcome outcome{psi, {}, std::nullopt};
    if (report.base_fails == false) {
      outcome.qualifies = false;
    } else {
      std::vector<PalFormula> announced;
      announced.reserve(args.size());
      for (const auto& a : args) announced.push_back(announce(psi, wrap(scope, possible, a)));
      outcome.check = check_paths(ts, substitute(tmpl, announced), q, options);
      if (outcome.check.result == false) {
        outcome.qualifies = false;
      } else if (outcome.check.result == true) {
        outcome.qualifies = report.base_fails;
      }
    }
    report.candidates.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace ltpal
