#pragma once

// JSON (nlohmann) forms of models, partitions, matrices and reports, plus
// the edge-list CSV for feature graphs.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvfc/collab.hpp"
#include "mvfc/csv.hpp"
#include "mvfc/ensemble.hpp"
#include "mvfc/graph.hpp"
#include "mvfc/linear_model.hpp"
#include "mvfc/partition.hpp"

namespace mvfc {

using json = nlohmann::ordered_json;

inline std::string to_string(Loss loss) { return loss == Loss::hinge ? "hinge" : "logistic"; }

inline Loss parse_loss(std::string_view name) {
  if (name == "hinge") return Loss::hinge;
  if (name == "logistic") return Loss::logistic;
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

inline std::string hex64(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

/// Stable digest of arbitrary text (FNV-1a, hex).
inline std::string content_hash(std::string_view text) { return hex64(fnv1a64(text)); }

// --- configs ---------------------------------------------------------------

inline json to_json(const TrainConfig& c) {
  return {{"loss", to_string(c.loss)},
          {"l2_lambda", c.l2_lambda},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"seed", c.seed}};
}

inline TrainConfig train_config_from_json(const json& j, TrainConfig c = {}) {
  if (j.contains("loss")) c.loss = parse_loss(j.at("loss").get<std::string>());
  if (j.contains("l2_lambda")) c.l2_lambda = j.at("l2_lambda").get<double>();
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
  if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

inline std::string config_fingerprint(const json& config) { return content_hash(config.dump()); }

// --- linear model ----------------------------------------------------------

inline json to_json(const LinearModel& m) {
  return {{"weights", m.weights}, {"bias", m.bias}, {"mean", m.mean}, {"scale", m.scale}};
}

inline LinearModel linear_model_from_json(const json& j) {
  LinearModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.mean = j.at("mean").get<std::vector<double>>();
  m.scale = j.at("scale").get<std::vector<double>>();
  if (m.mean.size() != m.weights.size() || m.scale.size() != m.weights.size())
    throw DataError("linear model arrays have inconsistent lengths");
  return m;
}

/// Model plus the fingerprint of the config that produced it.
inline json linear_model_artifact(const LinearModel& m, const TrainConfig& cfg) {
  json j = to_json(m);
  j["config"] = to_json(cfg);
  j["config_fingerprint"] = config_fingerprint(j["config"]);
  return j;
}

// --- partitions and graphs -------------------------------------------------

inline json to_json(const ViewPartition& p) { return {{"n_features", p.n_features()}, {"views", p.views()}}; }

inline ViewPartition partition_from_json(const json& j) {
  const auto views = j.at("views").get<std::vector<std::vector<std::size_t>>>();
  std::size_t n = 0;
  if (j.contains("n_features")) {
    n = j.at("n_features").get<std::size_t>();
  } else {
    for (const auto& v : views) n += v.size();
  }
  return ViewPartition(views, n);
}

inline std::string graph_to_csv(const FeatureGraph& g) {
  std::ostringstream out;
  out << "i,j,weight\n";
  for (const auto& e : g.edges()) out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
  return out.str();
}

// --- matrices --------------------------------------------------------------

inline json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

inline json to_json(const CollabMatrix& cm, const std::vector<std::string>& names, const CollabConfig& cfg,
                    const std::vector<PairErrors>& pairs = {}) {
  json j{{"schema", "mvfc.matrix/1"},
         {"kind", "collaboration"},
         {"names", names},
         {"values", matrix_rows(cm.values)},
         {"edge_threshold", cfg.edge_threshold},
         {"k_folds", cfg.k_folds},
         {"seed", cfg.seed},
         {"base", to_json(cfg.base)},
         {"config_fingerprint", cm.config_fingerprint}};
  if (!pairs.empty()) {
    json list = json::array();
    std::size_t p = 0;
    for (std::size_t i = 0; i < cm.values.rows(); ++i)
      for (std::size_t k = i + 1; k < cm.values.rows(); ++k, ++p)
        list.push_back({{"i", i},
                        {"j", k},
                        {"e1", pairs[p].e1},
                        {"e2", pairs[p].e2},
                        {"e12_raw", pairs[p].e12_raw},
                        {"e12", pairs[p].e12},
                        {"colab", collab_value(pairs[p])}});
    j["pairs"] = std::move(list);
  }
  return j;
}

inline Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("values").get<std::vector<std::vector<double>>>();
  Matrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw DataError("matrix JSON is not square");
    for (std::size_t k = 0; k < rows.size(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

// --- ensemble --------------------------------------------------------------

inline json to_json(const EnsembleModel& m, const BoostConfig& cfg) {
  json rounds = json::array();
  for (const auto& r : m.rounds)
    rounds.push_back({{"view", r.view}, {"error", r.error}, {"alpha", r.alpha}, {"model", to_json(r.model)}});
  json config{{"rounds", cfg.rounds},
              {"epsilon_cap", cfg.epsilon_cap},
              {"mode", to_string(cfg.mode)},
              {"seed", cfg.seed},
              {"base", to_json(cfg.base)}};
  const auto fingerprint = config_fingerprint(config);
  return {{"schema", "mvfc.ensemble/1"},
          {"mode", to_string(m.mode)},
          {"partition", to_json(m.partition)},
          {"rounds", std::move(rounds)},
          {"config", std::move(config)},
          {"config_fingerprint", fingerprint}};
}

inline EnsembleModel ensemble_from_json(const json& j) {
  if (j.value("schema", "") != "mvfc.ensemble/1") throw DataError("not an mvfc.ensemble/1 document");
  EnsembleModel m;
  m.mode = parse_fusion_mode(j.at("mode").get<std::string>());
  m.partition = partition_from_json(j.at("partition"));
  for (const auto& r : j.at("rounds")) {
    BoostRound round;
    round.view = r.at("view").get<std::vector<std::size_t>>();
    round.error = r.at("error").get<double>();
    round.alpha = r.at("alpha").get<double>();
    round.model = linear_model_from_json(r.at("model"));
    if (round.model.dimension() != round.view.size()) throw DataError("round model does not match its view");
    m.rounds.push_back(std::move(round));
  }
  if (m.rounds.empty()) throw DataError("ensemble has no rounds");
  return m;
}

inline json to_json(const EvalReport& r) {
  json rounds = json::array();
  for (const auto& s : r.per_round) rounds.push_back({{"view", s.view}, {"error", s.error}, {"alpha", s.alpha}});
  return {{"schema", "mvfc.eval/1"},
          {"accuracy", r.accuracy},
          {"n_samples", r.n_samples},
          {"mode", to_string(r.mode)},
          {"confusion",
           {{"true_positive", r.confusion.true_positive},
            {"true_negative", r.confusion.true_negative},
            {"false_positive", r.confusion.false_positive},
            {"false_negative", r.confusion.false_negative}}},
          {"per_round", std::move(rounds)}};
}

inline std::string eval_report_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "round,view,error,alpha\n";
  for (std::size_t t = 0; t < r.per_round.size(); ++t) {
    out << t << ",\"";
    for (std::size_t k = 0; k < r.per_round[t].view.size(); ++k) out << (k ? " " : "") << r.per_round[t].view[k];
    out << "\"," << format_double(r.per_round[t].error) << ',' << format_double(r.per_round[t].alpha) << '\n';
  }
  return out.str();
}

}  // namespace mvfc
