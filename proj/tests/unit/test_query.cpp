#include <cstdlib>

#include "doctest.h"
#include "generators.hpp"
#include "ltpal/error.hpp"
#include "ltpal/parser.hpp"
#include "ltpal/query.hpp"
#include "ltpal/temporal.hpp"
#include "oracles.hpp"

using namespace ltpal;

namespace {

const Atom kP{"p", "p"};
const Atom kQ{"q", "q"};
const Atom kHuman{"x", "Human"};
const Atom kUv{"x", "UV"};
const std::vector<AgentId> kA{"c1", "c2"};

PalModel frame(const std::string& prefix, const std::vector<AtomSet>& labels,
               const std::map<AgentId, RelationPairs>& rel = {}) {
  std::vector<World> ws;
  for (std::size_t k = 0; k < labels.size(); ++k) ws.push_back({prefix + std::to_string(k), labels[k]});
  return PalModel::from_pairs(ws, kA, rel);
}

Template clean_room() { return Template(parse_formula("G ($1 -> X !$2)")); }

// Brute-force verdict: enumerate every total path by nested loops and
// evaluate the filled template with the declarative evaluator.
struct Brute {
  std::optional<std::size_t> decisive;  // index of the first deciding path
  bool result;
};

Brute brute_check(const gen::RandomSystem& sys, const TemporalFormula& phi, Quantifier q, bool skip) {
  std::vector<std::size_t> sizes;
  for (const auto& l : sys.oracle.layers) sizes.push_back(l.worlds.size());
  auto paths = oracle::all_total_paths(sizes);
  for (std::size_t r = 0; r < paths.size(); ++r) {
    oracle::Path op;
    for (std::size_t l = skip ? 1 : 0; l < paths[r].size(); ++l) op.emplace_back(l, sys.oracle.layers[l].worlds[paths[r][l]]);
    const bool sat = oracle::holds(sys.oracle, op, 0, phi);
    if (q == Quantifier::All && !sat) return {r, false};
    if (q == Quantifier::Exists && sat) return {r, true};
  }
  return {std::nullopt, q == Quantifier::All};
}

PalFormula oracle_wrap(const Scope& s, bool possible, const PalFormula& p) {
  auto modal = [&](const PalFormula& f) {
    if (auto* g = std::get_if<GroupScope>(&s)) return dist(g->group, f);
    return knows(std::get<AgentScope>(s).agent, f);
  };
  return possible ? lnot(modal(lnot(p))) : modal(p);
}

}  // namespace

TEST_CASE("substitution") {
  Template t(parse_formula("G ($1 U X $2)"));
  CHECK(t.arity() == 2);
  std::vector<PalFormula> args{lnot(dist({"A"}, lnot(prop(kP)))), knows("i", prop(kQ))};
  auto got = substitute(t, args);
  CHECK(got == globally(until(leaf(args[0]), next(leaf(args[1])))));
  CHECK(pretty(got) == "G (!D{A} !p U X K{i} q)");
  CHECK(parse_formula(pretty(got)) == got);
  std::vector<PalFormula> ids{slot(1), slot(2)};
  CHECK(substitute(t, ids) == t.skeleton());
  CHECK_THROWS_AS(substitute(t, std::vector<PalFormula>{prop(kP)}), EvalError);
  CHECK_THROWS_AS(Template(parse_formula("F $2")), EvalError);
  CHECK_THROWS_AS(Template(parse_formula("F ($1 & $3)"), 2), EvalError);
}

TEST_CASE("clean-room verdicts") {
  // c1 cannot tell a human from a chair in frame 2; c2 can. UV comes on only
  // once the room is empty.
  auto good = build_ts({frame("a", {{kHuman}}),
                        frame("b", {{kHuman}, {}}, {{"c1", {{"b0", "b1"}}}}),
                        frame("c", {{}}),
                        frame("d", {{kUv}})});
  std::vector<Atom> atoms{kHuman, kUv};
  auto ok = check_verified_group(good, clean_room(), atoms, kA);
  CHECK(ok.result == true);
  CHECK(ok.paths_checked == 2);
  CHECK_FALSE(ok.path);

  // One extra UV world in frame 3, right after a human-present frame.
  auto bad = build_ts({frame("a", {{kHuman}}),
                       frame("b", {{kHuman}, {}}, {{"c1", {{"b0", "b1"}}}}),
                       frame("c", {{}, {kUv}}),
                       frame("d", {{kUv}})});
  auto ko = check_verified_group(bad, clean_room(), atoms, kA);
  CHECK(ko.result == false);
  REQUIRE(ko.path);
  CHECK(path_ids(bad, *ko.path) == std::vector<WorldId>{"w00", "a0", "b0", "c1", "d0", "w50"});
  CHECK_FALSE(tems(bad, *ko.path, wrapped_formula(clean_room(), std::vector<PalFormula>{prop(kHuman), prop(kUv)},
                                                  GroupScope{kA}, false)));
  // Possible scenario: some path avoids the violation.
  auto poss = check_possible_group(bad, clean_room(), atoms, kA);
  CHECK(poss.result == true);
  REQUIRE(poss.path);
  CHECK(path_ids(bad, *poss.path) == std::vector<WorldId>{"w00", "a0", "b0", "c0", "d0", "w50"});
  // c2 tells the frame-2 worlds apart on its own.
  CHECK(check_robust_agent(good, clean_room(), atoms, "c2").result == true);
}

TEST_CASE("single-path system coincides with plain evaluation") {
  auto ts = build_ts({frame("a", {{kP}}), frame("b", {{kQ}})});
  Template t(parse_formula("F $1"));
  std::vector<Atom> q{kQ};
  ExecPath only{0, {0, 0, 0, 0}};
  auto phi = wrapped_formula(t, std::vector<PalFormula>{prop(kQ)}, GroupScope{kA}, false);
  CHECK(check_verified_group(ts, t, q, kA).result == tems(ts, only, phi));
  CHECK(check_possible_group(ts, t, q, kA).result == true);
  CHECK(check_robust_agent(ts, t, q, "c1").result == true);
  CHECK(check_possible_agent(ts, t, q, "c1").result == true);
  std::vector<Atom> neg{Atom("z", "z")};
  CHECK(check_possible_group(ts, t, neg, kA).result == false);
  CHECK(check_possible_agent(ts, t, neg, "c2").result == false);
}

TEST_CASE("identity template reads the first position") {
  auto ts = build_ts({frame("a", {{kP}, {kP}}, {{"c1", {{"a0", "a1"}}}}), frame("b", {{}})});
  Template t(leaf(slot(1)));
  std::vector<Atom> p{kP};
  // With dummies the first position is the empty initial state.
  CHECK(check_verified_group(ts, t, p, kA).result == false);
  CheckOptions skip;
  skip.skip_dummies = true;
  CHECK(check_verified_group(ts, t, p, kA, skip).result == true);
  auto ts2 = build_ts({frame("a", {{kP}, {}}, {{"c1", {{"a0", "a1"}}}}), frame("b", {{}})});
  CHECK(check_verified_group(ts2, t, p, kA, skip).result == false);
  CHECK(check_verified_group(ts2, t, p, {"c2"}, skip).result == false);
  CHECK(check_possible_group(ts2, t, p, {"c2"}, skip).result == true);
}

TEST_CASE("missing information: announcing the missing fact") {
  // w: {p,q}, w': {p}; the agent cannot tell them apart.
  auto ts = build_ts({PalModel::from_pairs({{"w", {kP, kQ}}, {"wp", {kP}}}, {"i"}, {{"i", {{"w", "wp"}}}})});
  std::vector<PalFormula> args{prop(kQ)};
  std::vector<PalFormula> cands{prop(kQ), top(), bottom(), prop(kP)};

  auto eventually_rep = check_missing_info(ts, Template(parse_formula("F $1")), args, AgentScope{"i"},
                                           MissingMode::Verified, std::vector<PalFormula>{prop(kQ)});
  CHECK(eventually_rep.base_fails == true);
  CHECK(eventually_rep.qualifying() == std::vector<PalFormula>{prop(kQ)});

  auto rep = check_missing_info(ts, Template(parse_formula("G $1")), args, AgentScope{"i"}, MissingMode::Verified,
                                cands);
  CHECK(rep.base.result == false);
  CHECK(rep.base_fails == true);
  REQUIRE(rep.candidates.size() == 4);
  CHECK(rep.candidates[0].qualifies == true);   // q collapses the block at w
  CHECK(rep.candidates[1].qualifies == false);  // true is the identity update
  // [false]phi holds vacuously everywhere, so false passes any template in
  // which the wrapped arguments occur positively.
  CHECK(rep.candidates[2].qualifies == true);
  CHECK(rep.candidates[3].qualifies == false);  // p leaves the block intact at w
  CHECK(rep.qualifying() == std::vector<PalFormula>{prop(kQ), bottom()});
  CHECK_FALSE(rep.undecided());

  // Under negation the vacuous announcement makes the wrapped argument fail.
  auto rep2 = check_missing_info(ts, Template(parse_formula("G !$1")), std::vector<PalFormula>{prop(kP)},
                                 AgentScope{"i"}, MissingMode::Verified, std::vector<PalFormula>{bottom()});
  CHECK(rep2.base_fails == true);
  CHECK(rep2.qualifying().empty());
  CHECK_THROWS_AS(check_missing_info(ts, Template(parse_formula("F $1")), args, AgentScope{"i"},
                                     MissingMode::Verified, {}),
                  EvalError);
}

TEST_CASE("missing information: possible mode needs every path to fail") {
  auto ts = build_ts({PalModel::from_pairs({{"w", {kQ}}, {"wp", {}}}, {"i"}, {{"i", {{"w", "wp"}}}})});
  Template t(parse_formula("F $1"));
  // !K !q: q is possible at both worlds, so the base check passes.
  auto rep = check_missing_info(ts, t, std::vector<PalFormula>{prop(kQ)}, AgentScope{"i"}, MissingMode::Possible,
                                std::vector<PalFormula>{prop(kQ)});
  CHECK(rep.base_fails == false);
  CHECK(rep.qualifying().empty());
  // Nobody considers r possible. q fails at the dummy states, where the
  // announcement then holds vacuously; true changes nothing.
  auto rep2 = check_missing_info(ts, t, std::vector<PalFormula>{prop(Atom("r", "r"))}, AgentScope{"i"},
                                 MissingMode::Possible, std::vector<PalFormula>{prop(kQ), top()});
  CHECK(rep2.base_fails == true);
  CHECK(rep2.candidates[0].qualifies == true);
  REQUIRE(rep2.candidates[0].check.path);
  CHECK(path_ids(ts, *rep2.candidates[0].check.path) == std::vector<WorldId>{"w00", "w", "w20"});
  CHECK(rep2.candidates[1].qualifies == false);
}

TEST_CASE("path cap makes the check undecided") {
  // 18 total paths; q shows up only from rank 12 on.
  auto ts = build_ts({frame("a", {{}, {}, {kQ}}), frame("b", {{}, {}, {}}), frame("c", {{}, {}})});
  CheckOptions opt;
  opt.cap = 5;
  auto r = check_paths(ts, parse_formula("G !q"), Quantifier::All, opt);
  CHECK_FALSE(r.result.has_value());
  CHECK(r.capped);
  CHECK(r.paths_checked == 5);
  auto e = check_paths(ts, parse_formula("F q"), Quantifier::Exists, opt);
  CHECK_FALSE(e.result.has_value());
  // A decision inside the cap is final.
  opt.cap = 13;
  auto e2 = check_paths(ts, parse_formula("F q"), Quantifier::Exists, opt);
  CHECK(e2.result == true);
  CHECK(e2.paths_checked == 13);
  CHECK_FALSE(e2.capped);
  opt.cap = 18;
  auto r2 = check_paths(ts, parse_formula("G !q"), Quantifier::All, opt);
  CHECK(r2.result == false);
  CHECK(r2.path == total_path_at(ts, 12));
  CHECK(check_paths(ts, parse_formula("G !x:Cat"), Quantifier::All, opt).result == true);
}

TEST_CASE("restricting to one path") {
  auto ts = build_ts({frame("a", {{kP}, {}})});
  CheckOptions opt;
  opt.only_path = ExecPath{0, {0, 1, 0}};
  auto r = check_paths(ts, parse_formula("F p"), Quantifier::All, opt);
  CHECK(r.result == false);
  CHECK(r.paths_checked == 1);
  opt.only_path = ExecPath{1, {1}};
  CHECK_THROWS_AS(check_paths(ts, parse_formula("F p"), Quantifier::All, opt), EvalError);
}

TEST_CASE("parallel search reports the same least path") {
  gen::Rng rng(51);
  gen::Vocabulary v;
  v.agents = {"c1", "c2"};
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<PalModel> frames;
    for (int l = 0; l < 5; ++l) frames.push_back(gen::raw_model(rng, v, 4, "l" + std::to_string(l) + "w").to_model());
    auto ts = build_ts(frames);
    auto phi = gen::temporal_formula(rng, v, 3);
    for (auto q : {Quantifier::All, Quantifier::Exists}) {
      auto seq = check_paths(ts, phi, q);
      for (unsigned jobs : {2u, 4u, 7u}) {
        CheckOptions opt;
        opt.jobs = jobs;
        auto par = check_paths(ts, phi, q, opt);
        CHECK(par.result == seq.result);
        CHECK(par.path == seq.path);
        CHECK(par.paths_checked == seq.paths_checked);
      }
    }
  }
}

TEST_CASE("verdicts agree with brute force; singleton groups match agents; witnesses re-verify") {
  gen::Rng rng(52);
  gen::Vocabulary v;
  v.agents = {"a", "b"};
  int disagreements = 0;
  int monotone_failures = 0;
  for (int iter = 0; iter < 120; ++iter) {
    auto sys = gen::random_system(rng, v, 3, 3);
    const int arity = 1 + static_cast<int>(gen::pick(rng, 2));
    Template tmpl(gen::monotone_template(rng, v, 3, arity));
    std::vector<Atom> atoms;
    for (int k = 0; k < arity; ++k) atoms.push_back(v.atoms[gen::pick(rng, v.atoms.size())]);
    std::vector<PalFormula> args;
    for (const auto& a : atoms) args.push_back(prop(a));
    const bool skip = gen::coin(rng, 0.3);
    CheckOptions opt;
    opt.skip_dummies = skip;

    for (const Scope& scope : {Scope{GroupScope{{"a", "b"}}}, Scope{GroupScope{{"a"}}}, Scope{AgentScope{"a"}}}) {
      for (bool possible : {false, true}) {
        auto got = check_verdict(sys.ts, tmpl, args, scope, possible, opt);
        std::vector<PalFormula> wrapped;
        for (const auto& a : args) wrapped.push_back(oracle_wrap(scope, possible, a));
        auto phi = oracle::fill(tmpl.skeleton(), wrapped);
        auto q = possible ? Quantifier::Exists : Quantifier::All;
        auto want = brute_check(sys, phi, q, skip);
        if (got.result != want.result) ++disagreements;
        if (want.decisive) {
          REQUIRE(got.path);
          CHECK(*got.path == total_path_at(sys.ts, *want.decisive));
          auto eval_path = skip ? path_suffix(*got.path, 1) : *got.path;
          CHECK(tems(sys.ts, eval_path, phi) == possible);
          CHECK(is_total(sys.ts, *got.path));
        }
      }
    }
    // D_{i} and K_i are interchangeable.
    CHECK(check_verified_group(sys.ts, tmpl, atoms, {"a"}, opt).result ==
          check_robust_agent(sys.ts, tmpl, atoms, "a", opt).result);
    CHECK(check_possible_group(sys.ts, tmpl, atoms, {"b"}, opt).result ==
          check_possible_agent(sys.ts, tmpl, atoms, "b", opt).result);
    // Monotone templates: robust for i implies verified for every group with i.
    if (check_robust_agent(sys.ts, tmpl, atoms, "a", opt).result == true) {
      if (check_verified_group(sys.ts, tmpl, atoms, {"a", "b"}, opt).result != true) ++monotone_failures;
    }

    // Missing information against the two-stage brute force.
    std::vector<PalFormula> cands{top(), bottom(), gen::pal_formula(rng, v, 2), gen::pal_formula(rng, v, 2)};
    for (auto mode : {MissingMode::Verified, MissingMode::Possible}) {
      const bool possible = mode == MissingMode::Possible;
      Scope scope = gen::coin(rng) ? Scope{GroupScope{{"a", "b"}}} : Scope{AgentScope{"b"}};
      auto rep = check_missing_info(sys.ts, tmpl, args, scope, mode, cands, opt);
      std::vector<PalFormula> wrapped;
      for (const auto& a : args) wrapped.push_back(oracle_wrap(scope, possible, a));
      auto q = possible ? Quantifier::Exists : Quantifier::All;
      const bool base_fails = !brute_check(sys, oracle::fill(tmpl.skeleton(), wrapped), q, skip).result;
      CHECK(rep.base_fails == base_fails);
      for (std::size_t c = 0; c < cands.size(); ++c) {
        std::vector<PalFormula> announced;
        for (const auto& w : wrapped) announced.push_back(announce(cands[c], w));
        const bool passes = brute_check(sys, oracle::fill(tmpl.skeleton(), announced), q, skip).result;
        CHECK(rep.candidates[c].qualifies == (base_fails && passes));
      }
    }
  }
  CHECK(disagreements == 0);
  CHECK(monotone_failures == 0);
}
