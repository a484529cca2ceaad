#include "ltpal/cli.hpp"

#include <cstdlib>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ltpal/error.hpp"
#include "ltpal/io.hpp"
#include "ltpal/mppe.hpp"
#include "ltpal/parser.hpp"
#include "ltpal/query.hpp"
#include "ltpal/temporal.hpp"

namespace ltpal {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty item in list '" + s + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::uint64_t default_cap() {
  if (const char* env = std::getenv("LTPAL_PATH_CAP")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("LTPAL_PATH_CAP must be a positive integer, got '") + env + "'");
  }
  return kDefaultPathCap;
}

Json path_json(const TransitionSystem& ts, const std::optional<ExecPath>& p) {
  if (!p) return nullptr;
  return path_ids(ts, *p);
}

Json result_json(const std::optional<bool>& r) {
  if (!r) return nullptr;
  return *r;
}

int exit_for(const std::optional<bool>& r) {
  if (!r) return kExitUndecided;
  return *r ? kExitTrue : kExitFalse;
}

void check_agents(const TransitionSystem& ts, const std::set<AgentId>& used) {
  std::set<AgentId> roster(ts.agents().begin(), ts.agents().end());
  for (const auto& a : used) {
    if (!roster.contains(a)) throw EvalError("unknown agent '" + a + "'");
  }
}

void dummy_note(const TransitionSystem& ts, std::ostream& err) {
  err << "note: total paths start at '" << ts.initial() << "' and end at '" << ts.final_state()
      << "', whose labels are empty; pass --skip-dummies to evaluate from the first real frame\n";
}

std::vector<AgentId> resolve_group(const TransitionSystem& ts, const std::string& spec) {
  std::vector<AgentId> out;
  for (const auto& name : split_list(spec)) {
    auto it = ts.groups().find(name);
    if (it != ts.groups().end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    } else {
      out.push_back(name);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  check_agents(ts, {out.begin(), out.end()});
  return out;
}

// Scores attached to the system, else the built-in overlap scorer.
ScoreTable default_scores(const TsDocument& doc) {
  if (doc.scores) return *doc.scores;
  return score_edges(doc.ts, overlap_score);
}

struct Options {
  std::string frames, rules, output;
  std::string ts_file;
  std::size_t max_paths = 0;
  std::string formula;
  std::optional<std::uint64_t> path_index;
  bool all = false;
  bool mppe_only = false;
  bool skip_dummies = false;
  std::optional<std::uint64_t> cap;
  unsigned jobs = 1;
  std::string tmpl, atoms, group, agent, mode, candidates;
  std::string scores, scorer, scorer_cmd, corrected;
};

CheckOptions check_options(const Options& o) {
  CheckOptions c;
  c.cap = o.cap ? *o.cap : default_cap();
  if (c.cap == 0) throw ConfigError("--cap must be positive");
  c.skip_dummies = o.skip_dummies;
  c.jobs = std::max(1u, o.jobs);
  return c;
}

int cmd_build(const Options& o, std::ostream& out) {
  auto frames = frames_from_json(read_json_file(o.frames));
  RuleSet rules;
  if (!o.rules.empty()) rules = rules_from_json(read_json_file(o.rules));
  auto ts = build_ts(ingest(frames, rules), frames.groups);
  auto doc = ts_to_json(ts);
  Json summary;
  summary["layers"] = ts.layer_count();
  summary["states"] = ts.state_count();
  summary["edges"] = ts.edge_count();
  auto total = ts.total_path_count();
  summary["total_paths"] = total ? Json(*total) : Json(nullptr);
  if (o.output.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_json_file(o.output, doc);
    summary["output"] = o.output;
    out << summary.dump() << "\n";
  }
  return kExitTrue;
}

int cmd_paths(const Options& o, std::ostream& out) {
  auto doc = ts_from_json(read_json_file(o.ts_file));
  const auto& ts = doc.ts;
  std::uint64_t max = o.max_paths ? o.max_paths : default_cap();
  Json paths = Json::array();
  TotalPathEnumerator it(ts);
  std::uint64_t n = 0;
  bool truncated = false;
  while (auto p = it.next()) {
    if (n == max) {
      truncated = true;
      break;
    }
    paths.push_back(path_ids(ts, *p));
    ++n;
  }
  Json res;
  auto total = ts.total_path_count();
  res["total"] = total ? Json(*total) : Json(nullptr);
  res["paths"] = std::move(paths);
  res["truncated"] = truncated;
  out << res.dump() << "\n";
  return kExitTrue;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto doc = ts_from_json(read_json_file(o.ts_file));
  const auto& ts = doc.ts;
  auto phi = expand_groups(parse_formula(o.formula), ts.groups());
  if (!slots(phi).empty()) throw EvalError("formula contains template placeholders; use 'classify'");
  check_agents(ts, agents_of(phi));
  if (!o.skip_dummies) dummy_note(ts, err);

  Json res;
  res["formula"] = pretty(phi);
  if (o.path_index) {
    auto total = ts.total_path_count();
    if (total && *o.path_index >= *total) throw ConfigError("--path index beyond the number of total paths");
    auto p = total_path_at(ts, *o.path_index);
    auto evaluated = o.skip_dummies ? path_suffix(p, 1) : p;
    bool r = tems(ts, evaluated, phi);
    res["scope"] = "path";
    res["path"] = path_ids(ts, p);
    res["result"] = r;
    out << res.dump() << "\n";
    return r ? kExitTrue : kExitFalse;
  }

  auto opts = check_options(o);
  if (o.mppe_only) opts.only_path = mppe(ts, default_scores(doc)).best.path;
  auto r = check_paths(ts, phi, Quantifier::All, opts);
  res["scope"] = o.mppe_only ? "mppe" : "all";
  if (o.mppe_only) res["path"] = path_ids(ts, *opts.only_path);
  res["result"] = result_json(r.result);
  res["counterexample"] = path_json(ts, r.path);
  res["paths_checked"] = r.paths_checked;
  res["capped"] = r.capped;
  out << res.dump() << "\n";
  return exit_for(r.result);
}

Json check_json(const TransitionSystem& ts, const CheckResult& r) {
  Json j;
  j["result"] = result_json(r.result);
  bool universal = r.quantifier == Quantifier::All;
  j["witness"] = universal ? Json(nullptr) : path_json(ts, r.path);
  j["counterexample"] = universal ? path_json(ts, r.path) : Json(nullptr);
  j["paths_checked"] = r.paths_checked;
  j["capped"] = r.capped;
  return j;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  auto doc = ts_from_json(read_json_file(o.ts_file));
  const auto& ts = doc.ts;
  Template tmpl(expand_groups(parse_formula(o.tmpl), ts.groups()));
  check_agents(ts, agents_of(tmpl.skeleton()));

  std::vector<PalFormula> args;
  Json atoms = Json::array();
  for (const auto& a : split_list(o.atoms)) {
    auto atom = parse_atom(a);
    atoms.push_back(pretty(atom));
    args.push_back(prop(atom));
  }

  const bool is_missing = o.mode == "missing-verified" || o.mode == "missing-possible";
  const bool wants_group = o.mode == "verified" || o.mode == "possible";
  const bool wants_agent = o.mode == "robust" || o.mode == "possible-agent";
  if (o.group.empty() == o.agent.empty()) throw ConfigError("give exactly one of --group or --agent");
  if (wants_group && o.group.empty()) throw ConfigError("mode '" + o.mode + "' needs --group");
  if (wants_agent && o.agent.empty()) throw ConfigError("mode '" + o.mode + "' needs --agent");
  if (is_missing && o.candidates.empty()) throw ConfigError("mode '" + o.mode + "' needs --candidates");

  Scope scope = o.group.empty() ? Scope{AgentScope{o.agent}} : Scope{GroupScope{resolve_group(ts, o.group)}};
  if (!o.agent.empty()) check_agents(ts, {o.agent});
  const bool possible = o.mode == "possible" || o.mode == "possible-agent" || o.mode == "missing-possible";
  const bool group_scope = std::holds_alternative<GroupScope>(scope);

  auto opts = check_options(o);
  if (o.mppe_only) opts.only_path = mppe(ts, default_scores(doc)).best.path;
  if (!o.skip_dummies) dummy_note(ts, err);

  Json res;
  std::string mode_name;
  if (is_missing) {
    mode_name = std::string(possible ? "possible" : "verified") + "_missing_" + (group_scope ? "group" : "agent");
  } else {
    mode_name = std::string(possible ? "possible" : (group_scope ? "verified" : "robust")) + "_" +
                (group_scope ? "group" : "agent");
  }
  res["mode"] = mode_name;
  if (group_scope) {
    res["group"] = std::get<GroupScope>(scope).group;
  } else {
    res["agent"] = o.agent;
  }
  res["template"] = pretty(tmpl.skeleton());
  res["atoms"] = atoms;
  res["scope"] = o.mppe_only ? "mppe" : "all";

  if (!is_missing) {
    auto phi = wrapped_formula(tmpl, args, scope, possible);
    auto r = check_paths(ts, phi, possible ? Quantifier::Exists : Quantifier::All, opts);
    res["formula"] = pretty(phi);
    res.update(check_json(ts, r));
    out << res.dump() << "\n";
    return exit_for(r.result);
  }

  std::vector<PalFormula> candidates;
  for (const auto& text : candidates_from_json(read_json_file(o.candidates))) {
    auto c = expand_groups(parse_pal(text), ts.groups());
    check_agents(ts, agents_of(c));
    candidates.push_back(c);
  }
  auto report = check_missing_info(ts, tmpl, args, scope,
                                   possible ? MissingMode::Possible : MissingMode::Verified, candidates, opts);
  res["formula"] = pretty(wrapped_formula(tmpl, args, scope, possible));
  res["base"] = check_json(ts, report.base);
  res["base_fails"] = result_json(report.base_fails);
  Json list = Json::array();
  Json qualifying = Json::array();
  for (const auto& c : report.candidates) {
    Json item;
    item["candidate"] = pretty(c.candidate);
    item["qualifies"] = result_json(c.qualifies);
    if (report.base_fails != false) item["check"] = check_json(ts, c.check);
    list.push_back(item);
    if (c.qualifies.value_or(false)) qualifying.push_back(pretty(c.candidate));
  }
  res["candidates"] = list;
  res["qualifying"] = qualifying;
  std::optional<bool> overall = !qualifying.empty() ? std::optional<bool>(true)
                                : report.undecided() ? std::nullopt
                                                     : std::optional<bool>(false);
  res["result"] = result_json(overall);
  out << res.dump() << "\n";
  return exit_for(overall);
}

int cmd_mppe(const Options& o, std::ostream& out) {
  auto doc = ts_from_json(read_json_file(o.ts_file));
  const auto& ts = doc.ts;
  int sources = !o.scores.empty() + !o.scorer.empty() + !o.scorer_cmd.empty();
  if (sources > 1) throw ConfigError("give at most one of --scores, --scorer, --scorer-cmd");

  ScoreTable table;
  std::string source;
  if (!o.scores.empty()) {
    table = scores_from_edges(ts, scores_from_json(read_json_file(o.scores)));
    source = "file";
  } else if (!o.scorer_cmd.empty()) {
    ExternalScorer ext(o.scorer_cmd);
    table = score_edges(ts, [&](const LabelSet& a, const LabelSet& b) { return ext(a, b); });
    source = "command";
  } else if (!o.scorer.empty() || !doc.scores) {
    if (!o.scorer.empty() && o.scorer != "overlap") throw ConfigError("unknown scorer '" + o.scorer + "'");
    table = score_edges(ts, overlap_score);
    source = "overlap";
  } else {
    table = *doc.scores;
    source = "embedded";
  }

  auto r = mppe(ts, table);
  Json res;
  res["path"] = path_ids(ts, r.best.path);
  res["score"] = r.best.score();
  res["log_score"] = r.best.log_score;
  res["edges_visited"] = r.edges_visited;
  res["scores"] = source;
  out << res.dump() << "\n";

  if (!o.corrected.empty()) {
    Json frames = Json::array();
    for (const auto& f : correct_stream(ts, table)) {
      Json atoms = Json::array();
      for (const auto& a : f.atoms) atoms.push_back({a.data_id, a.class_id});
      frames.push_back({{"frame", f.layer - 1}, {"world", f.world}, {"atoms", atoms}});
    }
    write_json_file(o.corrected, Json{{"frames", frames}});
  }
  return kExitTrue;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking for linear temporal public announcement logic over classifier frame streams",
               "ltpal"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build a transition system from frames and rules");
  build->add_option("--frames", o.frames, "Frames JSON file")->required();
  build->add_option("--rules", o.rules, "Rules JSON file");
  build->add_option("-o,--output", o.output, "Where to write the transition system (default: stdout)");

  auto* paths = app.add_subcommand("paths", "List total execution paths");
  paths->add_option("--ts", o.ts_file, "Transition system JSON")->required();
  paths->add_option("--max", o.max_paths, "Maximum number of paths to list");

  auto* check = app.add_subcommand("check", "Evaluate a temporal formula on execution paths");
  check->add_option("--ts", o.ts_file, "Transition system JSON")->required();
  check->add_option("--formula", o.formula, "Formula text")->required();
  auto* by_path = check->add_option("--path", o.path_index, "Evaluate on the total path with this index");
  auto* all = check->add_flag("--all", o.all, "Require the formula on every total path (default)");
  auto* only = check->add_flag("--mppe-only", o.mppe_only, "Evaluate on the most probable path only");
  by_path->excludes(all)->excludes(only);
  all->excludes(only);
  check->add_flag("--skip-dummies", o.skip_dummies, "Evaluate from the first real frame");
  check->add_option("--cap", o.cap, "Maximum number of paths to examine");
  check->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Reliability verdict of a query template");
  classify->add_option("--ts", o.ts_file, "Transition system JSON")->required();
  classify->add_option("--template", o.tmpl, "Template with placeholders $1..$n")->required();
  classify->add_option("--atoms", o.atoms, "Comma-separated atoms for $1..$n")->required();
  auto* grp = classify->add_option("--group", o.group, "Comma-separated agents or group aliases");
  auto* agt = classify->add_option("--agent", o.agent, "Single agent");
  grp->excludes(agt);
  classify->add_option("--mode", o.mode, "Verdict mode")
      ->required()
      ->check(CLI::IsMember(
          {"verified", "possible", "robust", "possible-agent", "missing-verified", "missing-possible"}));
  classify->add_option("--candidates", o.candidates, "Candidate announcements JSON");
  classify->add_option("--cap", o.cap, "Maximum number of paths to examine");
  classify->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  classify->add_flag("--skip-dummies", o.skip_dummies, "Evaluate from the first real frame");
  classify->add_flag("--mppe-only", o.mppe_only, "Quantify over the most probable path only");

  auto* mp = app.add_subcommand("mppe", "Most probable execution path");
  mp->add_option("--ts", o.ts_file, "Transition system JSON")->required();
  mp->add_option("--scores", o.scores, "Edge scores JSON");
  mp->add_option("--scorer", o.scorer, "Built-in scorer (overlap)");
  mp->add_option("--scorer-cmd", o.scorer_cmd, "External scorer command");
  mp->add_option("--emit-corrected", o.corrected, "Write the corrected stream JSON here");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build(o, out);
    if (*paths) return cmd_paths(o, out);
    if (*check) return cmd_check(o, out, err);
    if (*classify) return cmd_classify(o, out, err);
    return cmd_mppe(o, out);
  } catch (const ParseError& e) {
    err << "error: formula " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace ltpal
