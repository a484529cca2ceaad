#include "ltpal/mppe.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ltpal/error.hpp"

namespace ltpal {

ScoreTable::ScoreTable(const TransitionSystem& ts, double fill) {
  fill = clamp_score(fill);
  for (std::size_t i = 0; i + 1 < ts.layer_count(); ++i) {
    widths_.push_back(ts.layer(i + 1).size());
    scores_.emplace_back(ts.layer(i).size() * ts.layer(i + 1).size(), fill);
  }
}

double ScoreTable::at(std::size_t layer, std::size_t from, std::size_t to) const {
  return scores_.at(layer).at(from * widths_.at(layer) + to);
}

void ScoreTable::set(std::size_t layer, std::size_t from, std::size_t to, double score) {
  if (to >= widths_.at(layer)) throw std::out_of_range("edge target out of range");
  scores_.at(layer).at(from * widths_[layer] + to) = clamp_score(score);
}

bool ScoreTable::matches(const TransitionSystem& ts) const {
  if (scores_.size() + 1 != ts.layer_count()) return false;
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (widths_[i] != ts.layer(i + 1).size() || scores_[i].size() != ts.layer(i).size() * widths_[i]) return false;
  }
  return true;
}

LabelSet class_labels(const AtomSet& atoms) {
  LabelSet out;
  for (const auto& a : atoms) out.insert(a.class_id);
  return out;
}

double overlap_score(const LabelSet& a, const LabelSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.contains(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double clamp_score(double raw) {
  if (std::isnan(raw)) throw ConfigError("similarity score is NaN");
  if (raw < 0) throw ConfigError("similarity score is negative");
  return std::clamp(raw, kScoreFloor, 1.0);
}

ScoreTable score_edges(const TransitionSystem& ts, const Scorer& scorer) {
  ScoreTable table(ts, 1.0);
  const std::size_t last = ts.layer_count() - 1;
  for (std::size_t i = 1; i + 1 < last; ++i) {
    const auto& from = ts.layer(i);
    const auto& to = ts.layer(i + 1);
    std::vector<LabelSet> to_labels;
    for (const auto& w : to.worlds()) to_labels.push_back(class_labels(w.atoms));
    for (std::size_t u = 0; u < from.size(); ++u) {
      auto a = class_labels(from.world(u).atoms);
      for (std::size_t v = 0; v < to.size(); ++v) table.set(i, u, v, scorer(a, to_labels[v]));
    }
  }
  return table;
}

ScoreTable scores_from_edges(const TransitionSystem& ts, const std::vector<ScoredEdge>& edges) {
  ScoreTable table(ts, 1.0);
  const std::size_t last = ts.layer_count() - 1;
  std::vector<std::vector<bool>> seen;
  for (std::size_t i = 0; i < last; ++i) seen.emplace_back(ts.layer(i).size() * ts.layer(i + 1).size(), false);
  for (const auto& e : edges) {
    auto from = ts.locate(e.from);
    auto to = ts.locate(e.to);
    if (!from || !to || to->layer != from->layer + 1)
      throw ConfigError("scored edge '" + e.from + "' -> '" + e.to + "' is not a transition");
    table.set(from->layer, from->index, to->index, e.score);
    seen[from->layer][from->index * ts.layer(to->layer).size() + to->index] = true;
  }
  for (std::size_t i = 1; i + 1 < last; ++i) {
    for (std::size_t u = 0; u < ts.layer(i).size(); ++u) {
      for (std::size_t v = 0; v < ts.layer(i + 1).size(); ++v) {
        if (!seen[i][u * ts.layer(i + 1).size() + v])
          throw ConfigError("no score for edge '" + ts.layer(i).world(u).id + "' -> '" +
                            ts.layer(i + 1).world(v).id + "'");
      }
    }
  }
  return table;
}

std::vector<ScoredEdge> list_edges(const TransitionSystem& ts, const ScoreTable& table) {
  std::vector<ScoredEdge> out;
  for (std::size_t i = 0; i + 1 < ts.layer_count(); ++i) {
    for (std::size_t u = 0; u < ts.layer(i).size(); ++u) {
      for (std::size_t v = 0; v < ts.layer(i + 1).size(); ++v) {
        out.push_back({ts.layer(i).world(u).id, ts.layer(i + 1).world(v).id, table.at(i, u, v)});
      }
    }
  }
  return out;
}

double ScoredPath::score() const { return std::exp(log_score); }

double path_log_score(const ScoreTable& table, const ExecPath& path) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    sum += std::log(table.at(path.first_layer + k, path.choices[k], path.choices[k + 1]));
  }
  return sum;
}

MppeResult mppe(const TransitionSystem& ts, const ScoreTable& table) {
  if (!table.matches(ts)) throw ConfigError("score table does not match the transition system");
  const std::size_t layers = ts.layer_count();
  MppeResult result;

  // best[v]: log-score of the best prefix ending in world v of the current
  // layer; back[i][v]: its predecessor in layer i-1.
  std::vector<double> best(1, 0.0);
  std::vector<std::vector<std::size_t>> back(layers);
  for (std::size_t i = 1; i < layers; ++i) {
    const std::size_t width = ts.layer(i).size();
    std::vector<double> cur(width);
    back[i].assign(width, 0);
    for (std::size_t v = 0; v < width; ++v) {
      for (std::size_t u = 0; u < best.size(); ++u) {
        double cand = best[u] + std::log(table.at(i - 1, u, v));
        ++result.edges_visited;
        if (u == 0 || cand > cur[v]) {
          cur[v] = cand;
          back[i][v] = u;
        }
      }
    }
    best = std::move(cur);
  }

  auto& path = result.best.path;
  path.choices.assign(layers, 0);
  for (std::size_t i = layers - 1; i > 0; --i) path.choices[i - 1] = back[i][path.choices[i]];
  result.best.log_score = best.front();
  return result;
}

std::vector<CorrectedFrame> correct_stream(const TransitionSystem& ts, const ScoreTable& table) {
  auto best = mppe(ts, table).best.path;
  std::vector<CorrectedFrame> out;
  for (std::size_t i = 1; i + 1 < ts.layer_count(); ++i) {
    const auto& w = ts.layer(i).world(best.choices[i]);
    out.push_back({i, w.id, w.atoms});
  }
  return out;
}

}  // namespace ltpal
