#include "ltpal/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ltpal/error.hpp"

namespace ltpal {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw IngestError(where + ": " + what); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  auto s = j.get<std::string>();
  if (!is_valid_identifier(s)) bad(where, "'" + s + "' is not a valid identifier");
  return s;
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

std::vector<AgentId> agent_list(const Json& j, const std::string& where) {
  std::vector<AgentId> out;
  std::set<AgentId> seen;
  const auto& arr = array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    auto a = str(arr[i], where + "[" + std::to_string(i) + "]");
    if (!seen.insert(a).second) bad(where + "[" + std::to_string(i) + "]", "duplicate agent '" + a + "'");
    out.push_back(std::move(a));
  }
  return out;
}

std::map<std::string, std::vector<AgentId>> groups_from(const Json& doc, const std::vector<AgentId>& agents,
                                                        const std::string& where) {
  std::map<std::string, std::vector<AgentId>> groups;
  auto it = doc.find("groups");
  if (it == doc.end()) return groups;
  if (!it->is_object()) bad(where, "expected an object");
  std::set<AgentId> known(agents.begin(), agents.end());
  for (const auto& [name, members] : it->items()) {
    std::string at = where + "." + name;
    if (!is_valid_identifier(name)) bad(at, "invalid group name");
    auto list = agent_list(members, at);
    if (list.empty()) bad(at, "group is empty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!known.contains(list[i])) bad(at + "[" + std::to_string(i) + "]", "unknown agent '" + list[i] + "'");
    }
    groups.emplace(name, std::move(list));
  }
  return groups;
}

std::vector<World> worlds_from(const Json& j, const std::string& where) {
  std::vector<World> out;
  const auto& arr = array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = where + "[" + std::to_string(i) + "]";
    World w;
    w.id = str(field(arr[i], "id", at), at + ".id");
    const auto& atoms = array(field(arr[i], "atoms", at), at + ".atoms");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      std::string a = at + ".atoms[" + std::to_string(k) + "]";
      if (!atoms[k].is_array() || atoms[k].size() != 2) bad(a, "expected a [data, class] pair");
      w.atoms.insert(Atom(str(atoms[k][0], a + "[0]"), str(atoms[k][1], a + "[1]")));
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::map<AgentId, RelationPairs> relations_from(const Json& obj, const std::vector<AgentId>& agents,
                                                const std::vector<World>& worlds, const std::string& where) {
  std::map<AgentId, RelationPairs> out;
  auto it = obj.find("relations");
  if (it == obj.end()) return out;
  if (!it->is_object()) bad(where, "expected an object");
  std::set<AgentId> known(agents.begin(), agents.end());
  std::set<WorldId> ids;
  for (const auto& w : worlds) ids.insert(w.id);
  for (const auto& [agent, pairs] : it->items()) {
    std::string at = where + "." + agent;
    if (!known.contains(agent)) bad(at, "unknown agent '" + agent + "'");
    auto& list = out[agent];
    const auto& arr = array(pairs, at);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = at + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) bad(p, "expected a [world, world] pair");
      auto a = str(arr[i][0], p + "[0]");
      auto b = str(arr[i][1], p + "[1]");
      if (!ids.contains(a)) bad(p, "unknown world id '" + a + "'");
      if (!ids.contains(b)) bad(p, "unknown world id '" + b + "'");
      list.emplace_back(std::move(a), std::move(b));
    }
  }
  return out;
}

Json atoms_json(const AtomSet& atoms) {
  Json arr = Json::array();
  for (const auto& a : atoms) arr.push_back({a.data_id, a.class_id});
  return arr;
}

Json relation_pairs_json(const PalModel& model, const Partition& part) {
  Json arr = Json::array();
  for (const auto& block : part.blocks()) {
    for (std::size_t k = 1; k < block.size(); ++k) {
      arr.push_back({model.world(block.front()).id, model.world(block[k]).id});
    }
  }
  return arr;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IngestError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
}

RuleSet rules_from_json(const Json& doc) {
  RuleSet rules;
  const auto& arr = array(field(doc, "rules", "rules file"), "rules");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = "rules[" + std::to_string(i) + "]";
    auto cls = str(field(arr[i], "class", at), at + ".class");
    std::set<std::string> implied;
    const auto& imp = array(field(arr[i], "implies", at), at + ".implies");
    for (std::size_t k = 0; k < imp.size(); ++k) implied.insert(str(imp[k], at + ".implies[" + std::to_string(k) + "]"));
    rules.add(cls, implied);
  }
  return rules;
}

FramesDocument frames_from_json(const Json& doc) {
  FramesDocument out;
  out.agents = agent_list(field(doc, "agents", "frames file"), "agents");
  out.groups = groups_from(doc, out.agents, "groups");
  const auto& frames = array(field(doc, "frames", "frames file"), "frames");
  if (frames.empty()) bad("frames", "at least one frame is required");
  for (std::size_t f = 0; f < frames.size(); ++f) {
    std::string at = "frames[" + std::to_string(f) + "]";
    FramesDocument::Frame frame;
    frame.worlds = worlds_from(field(frames[f], "worlds", at), at + ".worlds");
    if (frame.worlds.empty()) bad(at + ".worlds", "at least one world is required");
    std::set<WorldId> ids;
    for (std::size_t w = 0; w < frame.worlds.size(); ++w) {
      if (!ids.insert(frame.worlds[w].id).second)
        bad(at + ".worlds[" + std::to_string(w) + "].id", "duplicate world id '" + frame.worlds[w].id + "'");
    }
    frame.relations = relations_from(frames[f], out.agents, frame.worlds, at + ".relations");
    out.frames.push_back(std::move(frame));
  }
  return out;
}

Json frames_to_json(const FramesDocument& doc) {
  Json out;
  out["agents"] = doc.agents;
  if (!doc.groups.empty()) {
    Json g = Json::object();
    for (const auto& [name, members] : doc.groups) g[name] = members;
    out["groups"] = g;
  }
  Json frames = Json::array();
  for (const auto& f : doc.frames) {
    Json worlds = Json::array();
    for (const auto& w : f.worlds) worlds.push_back({{"id", w.id}, {"atoms", atoms_json(w.atoms)}});
    Json rel = Json::object();
    for (const auto& [agent, pairs] : f.relations) {
      Json arr = Json::array();
      for (const auto& [a, b] : pairs) arr.push_back({a, b});
      rel[agent] = arr;
    }
    frames.push_back({{"worlds", worlds}, {"relations", rel}});
  }
  out["frames"] = frames;
  return out;
}

std::vector<PalModel> ingest(const FramesDocument& doc, const RuleSet& rules) {
  std::vector<PalModel> models;
  models.reserve(doc.frames.size());
  for (const auto& f : doc.frames) {
    models.push_back(enrich_model(PalModel::from_pairs(f.worlds, doc.agents, f.relations), rules));
  }
  return models;
}

Json ts_to_json(const TransitionSystem& ts, const std::optional<ScoreTable>& scores) {
  Json out;
  out["agents"] = ts.agents();
  Json g = Json::object();
  for (const auto& [name, members] : ts.groups()) g[name] = members;
  out["groups"] = g;
  out["initial"] = ts.initial();
  out["final"] = ts.final_state();
  Json layers = Json::array();
  for (const auto& layer : ts.layers()) {
    Json worlds = Json::array();
    for (const auto& w : layer.worlds()) worlds.push_back({{"id", w.id}, {"atoms", atoms_json(w.atoms)}});
    Json rel = Json::object();
    for (const auto& agent : layer.agents()) rel[agent] = relation_pairs_json(layer, layer.relation(agent));
    layers.push_back({{"worlds", worlds}, {"relations", rel}});
  }
  out["layers"] = layers;
  Json edges = Json::array();
  for (std::size_t i = 0; i + 1 < ts.layer_count(); ++i) {
    for (std::size_t u = 0; u < ts.layer(i).size(); ++u) {
      for (std::size_t v = 0; v < ts.layer(i + 1).size(); ++v) {
        Json e = {{"from", ts.layer(i).world(u).id}, {"to", ts.layer(i + 1).world(v).id}};
        if (scores) e["score"] = scores->at(i, u, v);
        edges.push_back(e);
      }
    }
  }
  out["edges"] = edges;
  return out;
}

TsDocument ts_from_json(const Json& doc) {
  auto agents = agent_list(field(doc, "agents", "transition system"), "agents");
  auto groups = groups_from(doc, agents, "groups");
  const auto& layers_json = array(field(doc, "layers", "transition system"), "layers");
  std::vector<PalModel> layers;
  for (std::size_t i = 0; i < layers_json.size(); ++i) {
    std::string at = "layers[" + std::to_string(i) + "]";
    auto worlds = worlds_from(field(layers_json[i], "worlds", at), at + ".worlds");
    auto rel = relations_from(layers_json[i], agents, worlds, at + ".relations");
    try {
      layers.push_back(PalModel::from_pairs(std::move(worlds), agents, rel));
    } catch (const IngestError& e) {
      bad(at, e.what());
    }
  }
  TsDocument out{TransitionSystem(std::move(layers), std::move(groups)), std::nullopt};
  const auto& ts = out.ts;

  for (const char* key : {"initial", "final"}) {
    auto it = doc.find(key);
    if (it == doc.end()) continue;
    const auto& expect = std::string(key) == "initial" ? ts.initial() : ts.final_state();
    if (str(*it, key) != expect) bad(key, "does not name the dummy endpoint '" + expect + "'");
  }

  auto it = doc.find("edges");
  if (it == doc.end()) return out;
  const auto& edges = array(*it, "edges");
  ScoreTable table(ts, 1.0);
  std::set<std::pair<WorldId, WorldId>> seen;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = "edges[" + std::to_string(i) + "]";
    auto from = str(field(edges[i], "from", at), at + ".from");
    auto to = str(field(edges[i], "to", at), at + ".to");
    auto a = ts.locate(from);
    auto b = ts.locate(to);
    if (!a || !b || b->layer != a->layer + 1) bad(at, "'" + from + "' -> '" + to + "' is not a transition");
    if (!seen.emplace(from, to).second) bad(at, "duplicate edge");
    if (auto s = edges[i].find("score"); s != edges[i].end() && !s->is_null()) {
      if (!s->is_number()) bad(at + ".score", "expected a number");
      try {
        table.set(a->layer, a->index, b->index, s->get<double>());
      } catch (const ConfigError& e) {
        bad(at + ".score", e.what());
      }
      ++scored;
    }
  }
  if (seen.size() != ts.edge_count()) bad("edges", "transitions must connect consecutive layers completely");
  if (scored != 0 && scored != seen.size()) bad("edges", "either every edge or no edge carries a score");
  if (scored != 0) out.scores = std::move(table);
  return out;
}

std::vector<ScoredEdge> scores_from_json(const Json& doc) {
  std::vector<ScoredEdge> out;
  const auto& arr = array(field(doc, "edges", "scores file"), "edges");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = "edges[" + std::to_string(i) + "]";
    ScoredEdge e;
    e.from = str(field(arr[i], "from", at), at + ".from");
    e.to = str(field(arr[i], "to", at), at + ".to");
    const auto& s = field(arr[i], "score", at);
    if (!s.is_number()) bad(at + ".score", "expected a number");
    e.score = s.get<double>();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> candidates_from_json(const Json& doc) {
  const Json& arr = doc.is_object() ? field(doc, "candidates", "candidates file") : doc;
  std::vector<std::string> out;
  const auto& list = array(arr, "candidates");
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_string()) bad("candidates[" + std::to_string(i) + "]", "expected a formula string");
    out.push_back(list[i].get<std::string>());
  }
  return out;
}

}  // namespace ltpal
