#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ltpal/cli.hpp"
#include "ltpal/io.hpp"

using namespace ltpal;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LTPAL_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ltpal");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ltpal-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const Json& j) const {
    write_json_file(path_ / name, j);
    return file(name);
  }

 private:
  fs::path path_;
};

// p marks a frame in which q must not follow.
Json compliant_frames(bool violate) {
  auto doc = Json::parse(R"({
    "agents": ["i", "j"],
    "groups": {"A": ["i", "j"]},
    "frames": [
      {"worlds": [{"id": "a0", "atoms": [["q", "q"]]}, {"id": "a1", "atoms": []}],
       "relations": {"i": [["a0", "a1"]]}},
      {"worlds": [{"id": "b0", "atoms": [["p", "p"]]}, {"id": "b1", "atoms": [["p", "p"], ["q", "q"]]}]},
      {"worlds": [{"id": "c0", "atoms": []}, {"id": "c1", "atoms": []}]},
      {"worlds": [{"id": "d0", "atoms": [["q", "q"]]}]}
    ]})");
  if (violate) doc["frames"][2]["worlds"][1]["atoms"].push_back(Json::array({"q", "q"}));
  return doc;
}

std::string build(const TempDir& dir, const std::string& name, const Json& frames) {
  auto f = dir.write(name + "_frames.json", frames);
  auto ts = dir.file(name + "_ts.json");
  auto r = run({"build", "--frames", f, "-o", ts});
  REQUIRE(r.code == 0);
  return ts;
}

}  // namespace

TEST_CASE("build and paths on the worked example") {
  TempDir dir;
  auto ts = dir.file("ts.json");
  auto r = run({"build", "--frames", (kData / "example_frames.json").string(), "--rules",
                (kData / "animal_rules.json").string(), "-o", ts});
  REQUIRE(r.code == 0);
  auto summary = r.json();
  CHECK(summary["layers"] == 4);
  CHECK(summary["states"] == 7);
  CHECK(summary["edges"] == 11);
  CHECK(summary["total_paths"] == 6);
  CHECK(fs::exists(ts));

  auto p = run({"paths", "--ts", ts});
  REQUIRE(p.code == 0);
  auto j = p.json();
  REQUIRE(j["paths"].size() == 6);
  CHECK(j["paths"][0] == Json{"w00", "w10", "w20", "w30"});
  CHECK(j["paths"][1] == Json{"w00", "w10", "w21", "w30"});
  CHECK(j["paths"][5] == Json{"w00", "w12", "w21", "w30"});
  CHECK(j["truncated"] == false);
  auto two = run({"paths", "--ts", ts, "--max", "2"}).json();
  CHECK(two["paths"].size() == 2);
  CHECK(two["truncated"] == true);

  auto to_stdout = run({"build", "--frames", (kData / "example_frames.json").string()});
  CHECK(to_stdout.code == 0);
  CHECK(ts_from_json(Json::parse(to_stdout.out)).ts.state_count() == 7);
}

TEST_CASE("mppe on the worked example") {
  TempDir dir;
  auto ts = dir.file("ts.json");
  REQUIRE(run({"build", "--frames", (kData / "example_frames.json").string(), "-o", ts}).code == 0);
  auto corrected = dir.file("corrected.json");
  auto r = run({"mppe", "--ts", ts, "--scores", (kData / "example_scores.json").string(), "--emit-corrected", corrected});
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["path"] == Json{"w00", "w10", "w20", "w30"});
  CHECK(std::abs(j["score"].get<double>() - 0.032) < 1e-9);
  CHECK(j["edges_visited"] == 11);
  CHECK(j["scores"] == "file");
  auto c = read_json_file(corrected);
  REQUIRE(c["frames"].size() == 2);
  CHECK(c["frames"][0]["world"] == "w10");
  CHECK(c["frames"][1]["world"] == "w20");

  auto overlap = run({"mppe", "--ts", ts, "--scorer", "overlap"}).json();
  CHECK(overlap["scores"] == "overlap");
  CHECK(overlap["path"] == Json{"w00", "w10", "w20", "w30"});
  auto external = run({"mppe", "--ts", ts, "--scorer-cmd",
                       "python3 -u -c 'import sys\nfor l in sys.stdin: print(\"{\\\"score\\\": 0.5}\")'"});
  REQUIRE(external.code == 0);
  CHECK(external.json()["scores"] == "command");
  CHECK(external.json()["path"] == Json{"w00", "w10", "w20", "w30"});
  CHECK(run({"mppe", "--ts", ts, "--scorer", "cosine"}).code == 2);
  CHECK(run({"mppe", "--ts", ts, "--scorer", "overlap", "--scores", (kData / "example_scores.json").string()}).code == 2);
}

TEST_CASE("check on compliant and violating systems") {
  TempDir dir;
  auto good = build(dir, "good", compliant_frames(false));
  auto bad = build(dir, "bad", compliant_frames(true));
  auto ok = run({"check", "--ts", good, "--formula", "G(p -> X !q)", "--all"});
  CHECK(ok.code == 0);
  auto j = ok.json();
  CHECK(j["result"] == true);
  CHECK(j["counterexample"].is_null());
  CHECK(j["paths_checked"] == 8);
  CHECK(j["capped"] == false);
  CHECK(ok.err.find("--skip-dummies") != std::string::npos);

  auto ko = run({"check", "--ts", bad, "--formula", "G(p -> X !q)"});
  CHECK(ko.code == 1);
  CHECK(ko.json()["counterexample"] == Json{"w00", "a0", "b0", "c1", "d0", "w50"});

  auto one = run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--path", "0", "--skip-dummies"});
  CHECK(one.code == 0);
  CHECK(one.json()["path"] == Json{"w00", "a0", "b0", "c0", "d0", "w50"});
  CHECK(one.err.empty());
  CHECK(run({"check", "--ts", bad, "--formula", "p", "--path", "99"}).code == 2);

  auto mp = run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--mppe-only"});
  CHECK(mp.json()["scope"] == "mppe");
  // Overlap scoring favours the chain a0 b1 c1 d0, which violates the property.
  CHECK(mp.json()["path"] == Json{"w00", "a0", "b1", "c1", "d0", "w50"});
  CHECK(mp.code == 1);

  CHECK(run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--cap", "2"}).code == 1);
  CHECK(run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--cap", "1"}).code == 3);
  auto capped = run({"check", "--ts", good, "--formula", "G(p -> X !q)", "--cap", "3"});
  CHECK(capped.code == 3);
  CHECK(capped.json()["result"].is_null());
  CHECK(capped.json()["capped"] == true);

  CHECK(run({"check", "--ts", good, "--formula", "K{i} X p"}).code == 2);
  CHECK(run({"check", "--ts", good, "--formula", "K{nobody} p"}).code == 2);
  CHECK(run({"check", "--ts", good, "--formula", "F $1"}).code == 2);
  CHECK(run({"check", "--ts", good, "--formula", "F D{A} p"}).code == 0);
}

TEST_CASE("environment path cap") {
  TempDir dir;
  auto good = build(dir, "good", compliant_frames(false));
  setenv("LTPAL_PATH_CAP", "2", 1);
  auto r = run({"check", "--ts", good, "--formula", "G(p -> X !q)"});
  auto flag = run({"check", "--ts", good, "--formula", "G(p -> X !q)", "--cap", "100"});
  setenv("LTPAL_PATH_CAP", "lots", 1);
  auto bad_env = run({"check", "--ts", good, "--formula", "p"});
  unsetenv("LTPAL_PATH_CAP");
  CHECK(r.code == 3);
  CHECK(r.json()["paths_checked"] == 2);
  CHECK(flag.code == 0);
  CHECK(bad_env.code == 2);
}

TEST_CASE("classify modes") {
  TempDir dir;
  auto good = build(dir, "good", compliant_frames(false));
  auto bad = build(dir, "bad", compliant_frames(true));
  const std::string tmpl = "G ($1 -> X !$2)";
  auto v = run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--group", "A", "--mode", "verified"});
  CHECK(v.code == 0);
  auto j = v.json();
  CHECK(j["mode"] == "verified_group");
  CHECK(j["group"] == Json{"i", "j"});
  CHECK(j["atoms"] == Json{"p", "q"});
  CHECK(j["formula"] == "G (D{i,j} p -> X !D{i,j} q)");
  CHECK(j["witness"].is_null());

  auto f = run({"classify", "--ts", bad, "--template", tmpl, "--atoms", "p,q", "--group", "i,j", "--mode", "verified"});
  CHECK(f.code == 1);
  CHECK(f.json()["counterexample"] == Json{"w00", "a0", "b0", "c1", "d0", "w50"});

  auto poss = run({"classify", "--ts", bad, "--template", tmpl, "--atoms", "p,q", "--group", "A", "--mode", "possible"});
  CHECK(poss.json()["mode"] == "possible_group");
  CHECK(poss.json()["witness"].is_array());

  auto rob = run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--agent", "j", "--mode", "robust"});
  CHECK(rob.json()["mode"] == "robust_agent");
  CHECK(rob.json()["agent"] == "j");
  auto pa = run({"classify", "--ts", good, "--template", "F $1", "--atoms", "q", "--agent", "i", "--mode",
                 "possible-agent", "--skip-dummies"});
  CHECK(pa.code == 0);
  CHECK(pa.json()["mode"] == "possible_agent");
  CHECK(pa.err.empty());

  auto cands = dir.write("cands.json", Json{{"candidates", {"q", "true"}}});
  auto miss = run({"classify", "--ts", good, "--template", "X $1", "--atoms", "q", "--agent", "i", "--mode",
                   "missing-verified", "--candidates", cands, "--skip-dummies"});
  CHECK(miss.code == 0);
  auto m = miss.json();
  CHECK(m["mode"] == "verified_missing_agent");
  CHECK(m["base_fails"] == true);
  CHECK(m["qualifying"] == Json{"q"});
  CHECK(m["candidates"].size() == 2);

  CHECK(run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--mode", "verified"}).code == 2);
  CHECK(run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p", "--group", "A", "--mode", "verified"}).code == 2);
  CHECK(run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--group", "A", "--mode", "sure"}).code == 2);
  CHECK(run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--group", "A", "--mode",
             "missing-possible"}).code == 2);
  CHECK(run({"classify", "--ts", good, "--template", tmpl, "--atoms", "p,q", "--agent", "zz", "--mode", "robust"}).code == 2);
}

TEST_CASE("dangling relation id is reported") {
  TempDir dir;
  auto frames = compliant_frames(false);
  frames["frames"][0]["relations"]["i"].push_back(Json::array({"a0", "ghost"}));
  auto f = dir.write("frames.json", frames);
  auto r = run({"build", "--frames", f, "-o", dir.file("ts.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("ghost") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({"build", "--frames", dir.file("missing.json")}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check", "--formula", "p"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("results are byte-deterministic") {
  TempDir dir;
  auto bad = build(dir, "bad", compliant_frames(true));
  std::vector<std::vector<std::string>> cmds{
      {"check", "--ts", bad, "--formula", "G(p -> X !q)"},
      {"classify", "--ts", bad, "--template", "G ($1 -> X !$2)", "--atoms", "p,q", "--group", "A", "--mode", "possible"},
      {"mppe", "--ts", bad},
      {"paths", "--ts", bad},
  };
  for (const auto& c : cmds) {
    auto a = run(c);
    auto b = run(c);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
  auto seq = run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--jobs", "1"});
  auto par = run({"check", "--ts", bad, "--formula", "G(p -> X !q)", "--jobs", "4"});
  CHECK(seq.out == par.out);
  auto rebuilt = build(dir, "bad2", compliant_frames(true));
  std::ifstream x(bad), y(rebuilt);
  std::stringstream sx, sy;
  sx << x.rdbuf();
  sy << y.rdbuf();
  CHECK(sx.str() == sy.str());
}
