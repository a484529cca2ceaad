#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ltpal/transition_system.hpp"

namespace ltpal {

/// Lower bound applied to every transition score.
inline constexpr double kScoreFloor = 1e-6;

/// Transition scores for every edge of ->, stored per pair of consecutive
/// layers as a dense |W_i| x |W_i+1| matrix.
class ScoreTable {
 public:
  ScoreTable() = default;
  /// Every edge starts at `fill`.
  explicit ScoreTable(const TransitionSystem& ts, double fill = 1.0);

  /// Score of the edge from world `from` of `layer` to world `to` of layer+1.
  double at(std::size_t layer, std::size_t from, std::size_t to) const;
  /// Stores clamp_score(score).
  void set(std::size_t layer, std::size_t from, std::size_t to, double score);

  std::size_t edge_layers() const { return scores_.size(); }
  bool matches(const TransitionSystem& ts) const;

  bool operator==(const ScoreTable&) const = default;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::vector<double>> scores_;
};

/// Class ids of a world's atoms.
using LabelSet = std::set<std::string>;
using Scorer = std::function<double(const LabelSet&, const LabelSet&)>;

LabelSet class_labels(const AtomSet& atoms);

/// Jaccard overlap |a & b| / |a | b|; two empty sets score 1.
double overlap_score(const LabelSet& a, const LabelSet& b);

/// Validates a raw similarity and clamps it into [kScoreFloor, 1]. Throws
/// ConfigError for NaN or negative values.
double clamp_score(double raw);

/// Scores every real edge by the scorer; edges touching a dummy endpoint
/// score exactly 1.
ScoreTable score_edges(const TransitionSystem& ts, const Scorer& scorer);

struct ScoredEdge {
  WorldId from;
  WorldId to;
  double score = 1.0;
};

/// Table from explicit edge scores. Dummy edges default to 1; every real
/// edge must be listed. Throws ConfigError on missing or non-edges.
ScoreTable scores_from_edges(const TransitionSystem& ts, const std::vector<ScoredEdge>& edges);

/// All edges of -> in layer order with their scores.
std::vector<ScoredEdge> list_edges(const TransitionSystem& ts, const ScoreTable& table);

struct ScoredPath {
  ExecPath path;
  /// Sum of log edge scores.
  double log_score = 0.0;

  double score() const;
};

/// Log of the product of edge scores along a path.
double path_log_score(const ScoreTable& table, const ExecPath& path);

struct MppeResult {
  ScoredPath best;
  /// Edge relaxations performed; equals |->|.
  std::uint64_t edges_visited = 0;
};

/// Most probable total path by max-product dynamic programming, layer by
/// layer. Among equal-scoring predecessors the one with the smaller world
/// index wins.
MppeResult mppe(const TransitionSystem& ts, const ScoreTable& table);

struct CorrectedFrame {
  std::size_t layer = 0;
  WorldId world;
  AtomSet atoms;
};

/// The most probable path projected onto the real layers.
std::vector<CorrectedFrame> correct_stream(const TransitionSystem& ts, const ScoreTable& table);

/// Similarity computed by a child process. Each query writes one line
/// {"a":[...],"b":[...]} to its stdin and reads one line {"score":x} back.
class ExternalScorer {
 public:
  explicit ExternalScorer(const std::string& command);
  ~ExternalScorer();
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  double operator()(const LabelSet& a, const LabelSet& b);

 private:
  struct Process;
  std::unique_ptr<Process> proc_;
};

}  // namespace ltpal
