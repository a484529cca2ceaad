#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltpal/mppe.hpp"
#include "ltpal/model.hpp"
#include "ltpal/transition_system.hpp"

namespace ltpal {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; IngestError on I/O or syntax errors.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// {"rules":[{"class":"Cat","implies":["Animal"]}, ...]}; repeated classes merge.
RuleSet rules_from_json(const Json& doc);

/// Classifier output for a sequence of frames, before rule closure.
struct FramesDocument {
  std::vector<AgentId> agents;
  std::map<std::string, std::vector<AgentId>> groups;
  struct Frame {
    std::vector<World> worlds;
    std::map<AgentId, RelationPairs> relations;
  };
  std::vector<Frame> frames;
};

/// {"agents":[...],"groups":{...},"frames":[{"worlds":[{"id":..,"atoms":[["x","Cat"],..]}],
///  "relations":{"agent":[["wA","wB"],..]}}]}. Errors name the offending
/// JSON path.
FramesDocument frames_from_json(const Json& doc);
Json frames_to_json(const FramesDocument& doc);

/// Per frame: relations closed to equivalences, atoms closed under rules.
std::vector<PalModel> ingest(const FramesDocument& doc, const RuleSet& rules);

/// Serialized transition system plus optional edge scores.
struct TsDocument {
  TransitionSystem ts;
  std::optional<ScoreTable> scores;
};

Json ts_to_json(const TransitionSystem& ts, const std::optional<ScoreTable>& scores = std::nullopt);
TsDocument ts_from_json(const Json& doc);

/// {"edges":[{"from":..,"to":..,"score":..}, ...]}
std::vector<ScoredEdge> scores_from_json(const Json& doc);

/// Either ["f", ...] or {"candidates":["f", ...]}.
std::vector<std::string> candidates_from_json(const Json& doc);

}  // namespace ltpal
