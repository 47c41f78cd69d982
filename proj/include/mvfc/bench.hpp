#pragma once

// End-to-end benchmark: one train/test split, up to four methods
//   whole_set         single base classifier on all features
//   interaction_gain  IG matrix -> graph -> views -> ensemble
//   collaboration     collaboration matrix -> graph -> views -> ensemble
//   exhaustive        best ensemble over every partition (f <= 12)
// and a versioned JSON report. Wall-clock timings go to a separate file so
// the report itself is a pure function of the run config.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mvfc/collab.hpp"
#include "mvfc/csv.hpp"
#include "mvfc/dataset.hpp"
#include "mvfc/ensemble.hpp"
#include "mvfc/exhaustive.hpp"
#include "mvfc/graph.hpp"
#include "mvfc/interaction_gain.hpp"
#include "mvfc/serialize.hpp"

namespace mvfc {

inline constexpr const char* kBenchSchema = "mvfc.bench/1";
inline const std::vector<std::string> kAllMethods{"whole_set", "interaction_gain", "collaboration", "exhaustive"};

struct DatasetSource {
  enum class Kind { csv, synthetic, blocks } kind = Kind::synthetic;
  std::filesystem::path csv_path;
  std::string label_column = "label";
  SyntheticSpec synthetic;
  BlockSpec blocks;
  bool explicit_seed = false;  // generator seed given rather than derived
  std::string name;            // display name in the table
};

/// Module seeds derive from the global seed as derive_seed(seed, <stage>),
/// stages: "split", "collab", "community", "boost", "exhaustive", "base",
/// "synthetic" (unless the generator seed is given explicitly).
struct RunConfig {
  DatasetSource dataset;
  SplitSpec split;
  CollabConfig collab;
  DiscretizationConfig discretization;
  double ig_edge_threshold = 0.01;
  CommunityConfig community;
  BoostConfig boost;
  double validation_fraction = 0.3;
  std::vector<std::string> methods = kAllMethods;
  std::filesystem::path output_dir = "mvfc-out";
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  /// Applies the seed derivation to every module config.
  void derive_seeds() {
    split.seed = derive_seed(seed, "split");
    collab.seed = derive_seed(seed, "collab");
    community.seed = derive_seed(seed, "community");
    boost.seed = derive_seed(seed, "boost");
    boost.base.seed = derive_seed(seed, "base");
    collab.base.seed = boost.base.seed;
    if (!dataset.explicit_seed) {
      dataset.synthetic.seed = derive_seed(seed, "synthetic");
      dataset.blocks.seed = derive_seed(seed, "synthetic");
    }
  }

  void validate() const {
    for (const auto& m : methods)
      if (std::find(kAllMethods.begin(), kAllMethods.end(), m) == kAllMethods.end())
        throw ConfigError("unknown method '" + m + "'");
    if (methods.empty()) throw ConfigError("no methods selected");
    collab.validate();
    discretization.validate();
    boost.validate();
    if (!(ig_edge_threshold >= 0.0)) throw ConfigError("interaction-gain edge threshold must be nonnegative");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
      throw ConfigError("validation_fraction must lie in (0, 1)");
    if (dataset.kind == DatasetSource::Kind::synthetic) dataset.synthetic.validate();
    if (dataset.kind == DatasetSource::Kind::blocks) dataset.blocks.validate();
  }

  bool wants(std::string_view method) const {
    return std::find(methods.begin(), methods.end(), method) != methods.end();
  }
};

// --- config file -------------------------------------------------------------

inline SyntheticSpec synthetic_from_json(const json& j, SyntheticSpec s = {}) {
  s.n_samples = j.value("n_samples", s.n_samples);
  s.n_features = j.value("n_features", s.n_features);
  s.n_informative = j.value("n_informative", s.n_informative);
  s.n_redundant = j.value("n_redundant", s.n_redundant);
  s.class_sep = j.value("class_sep", s.class_sep);
  s.flip_y = j.value("flip_y", s.flip_y);
  s.seed = j.value("seed", s.seed);
  return s;
}

inline json to_json(const SyntheticSpec& s) {
  return {{"n_samples", s.n_samples}, {"n_features", s.n_features}, {"n_informative", s.n_informative},
          {"n_redundant", s.n_redundant}, {"class_sep", s.class_sep},     {"flip_y", s.flip_y},
          {"seed", s.seed}};
}

inline BlockSpec blocks_from_json(const json& j, BlockSpec s = {}) {
  s.n_samples = j.value("n_samples", s.n_samples);
  s.n_blocks = j.value("n_blocks", s.n_blocks);
  s.block_size = j.value("block_size", s.block_size);
  s.agreement = j.value("agreement", s.agreement);
  s.seed = j.value("seed", s.seed);
  return s;
}

inline json to_json(const BlockSpec& s) {
  return {{"n_samples", s.n_samples}, {"n_blocks", s.n_blocks}, {"block_size", s.block_size},
          {"agreement", s.agreement}, {"seed", s.seed}};
}

/// Reads a run config document. Unknown keys are rejected so typos surface.
inline RunConfig run_config_from_json(const json& j) {
  static const std::vector<std::string> known{"dataset", "split", "collab", "discretization", "interaction_gain",
                                              "community", "boost", "base", "exhaustive", "methods",
                                              "output_dir", "seed", "threads"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown run config key '" + key + "'");

  RunConfig c;
  c.seed = j.value("seed", std::uint64_t{0});
  c.threads = j.value("threads", std::size_t{1});
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();

  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    c.dataset.name = d.value("name", std::string{});
    if (d.contains("csv")) {
      c.dataset.kind = DatasetSource::Kind::csv;
      c.dataset.csv_path = d.at("csv").get<std::string>();
      c.dataset.label_column = d.value("label_column", std::string("label"));
    } else if (d.contains("synthetic")) {
      c.dataset.kind = DatasetSource::Kind::synthetic;
      c.dataset.synthetic = synthetic_from_json(d.at("synthetic"));
      c.dataset.explicit_seed = d.at("synthetic").contains("seed");
    } else if (d.contains("blocks")) {
      c.dataset.kind = DatasetSource::Kind::blocks;
      c.dataset.blocks = blocks_from_json(d.at("blocks"));
      c.dataset.explicit_seed = d.at("blocks").contains("seed");
    } else {
      throw ConfigError("dataset needs one of 'csv', 'synthetic', 'blocks'");
    }
  }
  if (j.contains("split")) {
    c.split.test_fraction = j.at("split").value("test_fraction", c.split.test_fraction);
    c.split.stratified = j.at("split").value("stratified", c.split.stratified);
  }
  if (j.contains("collab")) {
    c.collab.k_folds = j.at("collab").value("k_folds", c.collab.k_folds);
    c.collab.edge_threshold = j.at("collab").value("edge_threshold", c.collab.edge_threshold);
  }
  if (j.contains("discretization")) c.discretization.n_bins = j.at("discretization").value("n_bins", c.discretization.n_bins);
  if (j.contains("interaction_gain"))
    c.ig_edge_threshold = j.at("interaction_gain").value("edge_threshold", c.ig_edge_threshold);
  if (j.contains("community")) {
    const auto& cm = j.at("community");
    if (cm.contains("backend")) c.community.backend = parse_backend(cm.at("backend").get<std::string>());
    c.community.max_iters = cm.value("max_iters", c.community.max_iters);
  }
  if (j.contains("boost")) {
    const auto& b = j.at("boost");
    c.boost.rounds = b.value("rounds", c.boost.rounds);
    c.boost.epsilon_cap = b.value("epsilon_cap", c.boost.epsilon_cap);
    if (b.contains("mode")) c.boost.mode = parse_fusion_mode(b.at("mode").get<std::string>());
  }
  if (j.contains("base")) c.boost.base = train_config_from_json(j.at("base"));
  c.collab.base = c.boost.base;
  if (j.contains("exhaustive")) c.validation_fraction = j.at("exhaustive").value("validation_fraction", c.validation_fraction);
  c.derive_seeds();
  c.validate();
  return c;
}

/// Config echo with every derived seed filled in.
inline json to_json(const RunConfig& c) {
  json dataset;
  switch (c.dataset.kind) {
    case DatasetSource::Kind::csv:
      dataset = {{"csv", c.dataset.csv_path.string()}, {"label_column", c.dataset.label_column}};
      break;
    case DatasetSource::Kind::synthetic:
      dataset = {{"synthetic", to_json(c.dataset.synthetic)}};
      break;
    case DatasetSource::Kind::blocks:
      dataset = {{"blocks", to_json(c.dataset.blocks)}};
      break;
  }
  if (!c.dataset.name.empty()) dataset["name"] = c.dataset.name;
  return {{"seed", c.seed},
          {"dataset", dataset},
          {"split", {{"test_fraction", c.split.test_fraction}, {"stratified", c.split.stratified}, {"seed", c.split.seed}}},
          {"collab", {{"k_folds", c.collab.k_folds}, {"edge_threshold", c.collab.edge_threshold}, {"seed", c.collab.seed}}},
          {"discretization", {{"n_bins", c.discretization.n_bins}, {"strategy", "equal_frequency"}}},
          {"interaction_gain", {{"edge_threshold", c.ig_edge_threshold}, {"negative_values_floored_for_edges", true}}},
          {"community", {{"backend", to_string(c.community.backend)}, {"max_iters", c.community.max_iters}, {"seed", c.community.seed}}},
          {"boost", {{"rounds", c.boost.rounds}, {"epsilon_cap", c.boost.epsilon_cap}, {"mode", to_string(c.boost.mode)}, {"seed", c.boost.seed}}},
          {"base", to_json(c.boost.base)},
          {"exhaustive", {{"validation_fraction", c.validation_fraction}, {"selection", "validation split carved from train, winner retrained on full train"}}},
          {"methods", c.methods}};
}

// --- running -------------------------------------------------------------------

inline Dataset load_source(const DatasetSource& src) {
  switch (src.kind) {
    case DatasetSource::Kind::csv: return load_csv(src.csv_path, src.label_column);
    case DatasetSource::Kind::synthetic: return generate_synthetic(src.synthetic);
    case DatasetSource::Kind::blocks: return generate_blocks(src.blocks);
  }
  throw ConfigError("unknown dataset source");
}

inline std::string display_name(const RunConfig& c) {
  if (!c.dataset.name.empty()) return c.dataset.name;
  switch (c.dataset.kind) {
    case DatasetSource::Kind::csv: return c.dataset.csv_path.stem().string();
    case DatasetSource::Kind::synthetic:
      return "synthetic " + std::to_string(c.dataset.synthetic.n_samples) + "x" +
             std::to_string(c.dataset.synthetic.n_features);
    case DatasetSource::Kind::blocks:
      return "blocks " + std::to_string(c.dataset.blocks.n_samples) + "x" +
             std::to_string(c.dataset.blocks.n_blocks * c.dataset.blocks.block_size);
  }
  return "dataset";
}

inline std::string row_hash(std::span<const std::size_t> rows) {
  std::string bytes;
  for (std::size_t r : rows) bytes += std::to_string(r) + ',';
  return content_hash(bytes);
}

struct BenchOutcome {
  json report;
  json timings;
  std::string table;
  bool all_ok = true;
};

namespace detail {

inline json ensemble_summary(const EnsembleModel& m) {
  json rounds = json::array();
  for (const auto& r : m.rounds) rounds.push_back({{"view", r.view}, {"error", r.error}, {"alpha", r.alpha}});
  return {{"mode", to_string(m.mode)}, {"rounds", std::move(rounds)}};
}

inline std::string percent(const json& method) {
  if (!method.is_object() || method.value("status", "") != "ok") return method.is_object() ? "failed" : "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << 100.0 * method.at("accuracy").get<double>() << '%';
  return out.str();
}

}  // namespace detail

/// Aligned text table with the four method columns.
inline std::string bench_table(const json& report) {
  const std::vector<std::pair<std::string, std::string>> columns{{"whole_set", "Whole Feature Set"},
                                                                 {"interaction_gain", "Interaction Gain"},
                                                                 {"collaboration", "Collaboration Value"},
                                                                 {"exhaustive", "Exhaustive Search"}};
  const std::string name = report.at("dataset").at("name").get<std::string>();
  const std::size_t first = std::max<std::size_t>(7, name.size()) + 2;
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(first)) << "Dataset";
  for (const auto& [key, title] : columns) out << std::setw(static_cast<int>(title.size() + 2)) << title;
  out << '\n' << std::setw(static_cast<int>(first)) << name;
  for (const auto& [key, title] : columns) {
    const auto& methods = report.at("methods");
    out << std::setw(static_cast<int>(title.size() + 2))
        << (methods.contains(key) ? detail::percent(methods.at(key)) : "-");
  }
  out << '\n';
  std::string text = out.str();
  std::string trimmed;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + '\n';
  }
  return trimmed;
}

/// Runs the configured methods and writes report.json, report.txt,
/// timings.json and the matrix/partition artifacts into c.output_dir.
inline BenchOutcome run_bench(const RunConfig& c, bool write_files = true) {
  using clock = std::chrono::steady_clock;
  c.validate();
  BenchOutcome out;
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  auto write = [&](const std::string& file, const std::string& contents) {
    if (write_files) write_file_atomic(c.output_dir / file, contents);
    return content_hash(contents);
  };

  auto t0 = clock::now();
  const Dataset ds = load_source(c.dataset);
  const Split parts = split(ds, c.split);
  out.timings["load_and_split"] = seconds_since(t0);

  json& report = out.report;
  report["schema_version"] = kBenchSchema;
  report["config"] = to_json(c);
  report["dataset"] = {{"name", display_name(c)},
                       {"n_samples", ds.n_samples()},
                       {"n_features", ds.n_features()},
                       {"fingerprint", dataset_fingerprint(ds)}};
  const std::string split_hash = row_hash(parts.test_rows);
  report["split"] = {{"train_rows", parts.train_rows.size()},
                     {"test_rows", parts.test_rows.size()},
                     {"test_row_hash", split_hash}};
  report["methods"] = json::object();
  report["artifacts"] = json::object();

  auto run_method = [&](const std::string& name, const std::function<json()>& body) {
    if (!c.wants(name)) return;
    const auto start = clock::now();
    json result;
    try {
      result = body();
      result["status"] = "ok";
      result["test_row_hash"] = split_hash;
    } catch (const std::exception& e) {
      result = {{"status", "failed"}, {"error", e.what()}};
      out.all_ok = false;
    }
    report["methods"][name] = std::move(result);
    out.timings[name] = seconds_since(start);
  };

  auto views_method = [&](const Matrix& matrix, double tau, const std::string& prefix) {
    const auto graph = build_graph(matrix, tau);
    report["artifacts"][prefix + "_graph.csv"] = write(prefix + "_graph.csv", graph_to_csv(graph));
    const auto views = detect_views(graph, c.community);
    report["artifacts"][prefix + "_views.json"] = write(prefix + "_views.json", to_json(views).dump(2) + "\n");
    const auto model = train_ensemble(parts.train, views, c.boost, c.threads);
    const auto eval = evaluate(model, parts.test);
    return json{{"accuracy", eval.accuracy},
                {"views", views.views()},
                {"n_edges", graph.edges().size()},
                {"modularity", modularity(graph, views)},
                {"ensemble", detail::ensemble_summary(model)}};
  };

  run_method("whole_set", [&] {
    const auto model = train(parts.train, c.boost.base);
    return json{{"accuracy", accuracy(predict(model, parts.test), parts.test.labels())}};
  });

  run_method("interaction_gain", [&] {
    const auto t = clock::now();
    const Matrix raw = interaction_gain_matrix(parts.train, c.discretization, c.threads);
    out.timings["interaction_gain_matrix"] = seconds_since(t);
    const auto csv = matrix_to_csv(raw, ds.feature_names());
    report["artifacts"]["ig_matrix.csv"] = write("ig_matrix.csv", csv);
    json doc{{"schema", "mvfc.matrix/1"},
             {"kind", "interaction_gain"},
             {"names", ds.feature_names()},
             {"values", matrix_rows(raw)},
             {"n_bins", c.discretization.n_bins},
             {"negative_values_floored_for_edges", true}};
    report["artifacts"]["ig_matrix.json"] = write("ig_matrix.json", doc.dump(2) + "\n");
    json result = views_method(floor_negative(raw), c.ig_edge_threshold, "ig");
    result["matrix_csv"] = "ig_matrix.csv";
    result["negative_values_floored_for_edges"] = true;
    return result;
  });

  run_method("collaboration", [&] {
    const auto t = clock::now();
    std::vector<PairErrors> pairs;
    const auto cm = collab_matrix(parts.train, c.collab, c.threads, &pairs);
    out.timings["collaboration_matrix"] = seconds_since(t);
    report["artifacts"]["collab_matrix.csv"] = write("collab_matrix.csv", matrix_to_csv(cm.values, ds.feature_names()));
    report["artifacts"]["collab_matrix.json"] =
        write("collab_matrix.json", to_json(cm, ds.feature_names(), c.collab, pairs).dump(2) + "\n");
    json result = views_method(cm.values, c.collab.edge_threshold, "collab");
    result["matrix_csv"] = "collab_matrix.csv";
    result["config_fingerprint"] = cm.config_fingerprint;
    return result;
  });

  run_method("exhaustive", [&] {
    if (ds.n_features() > kMaxExhaustiveFeatures)
      throw ConfigError("exhaustive search needs at most " + std::to_string(kMaxExhaustiveFeatures) + " features");
    ExhaustiveConfig ec{c.boost, c.validation_fraction, derive_seed(c.seed, "exhaustive")};
    const auto result = exhaustive_view_search(parts.train, parts.test, ec, c.threads);
    return json{{"accuracy", result.test_accuracy},
                {"validation_accuracy", result.validation_accuracy},
                {"views", result.best.views()},
                {"candidates", result.candidates.size()},
                {"ensemble", detail::ensemble_summary(result.model)}};
  });

  out.table = bench_table(report);
  out.timings["total"] = seconds_since(t0);
  if (write_files) {
    write_file_atomic(c.output_dir / "report.json", report.dump(2) + "\n");
    write_file_atomic(c.output_dir / "report.txt", out.table);
    write_file_atomic(c.output_dir / "timings.json", out.timings.dump(2) + "\n");
  }
  return out;
}

/// Structural check of a bench report against schema mvfc.bench/1. Returns
/// the list of problems (empty when valid).
inline std::vector<std::string> validate_bench_report(const json& r) {
  std::vector<std::string> problems;
  auto need = [&](const json& obj, const std::string& key, auto pred, const std::string& what) {
    if (!obj.is_object() || !obj.contains(key) || !pred(obj.at(key))) {
      problems.push_back("'" + key + "' missing or not " + what);
      return false;
    }
    return true;
  };
  const auto is_string = [](const json& v) { return v.is_string(); };
  const auto is_object = [](const json& v) { return v.is_object(); };
  const auto is_count = [](const json& v) { return v.is_number_unsigned(); };
  const auto is_unit = [](const json& v) { return v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0; };

  if (need(r, "schema_version", is_string, "a string") && r.at("schema_version") != kBenchSchema)
    problems.push_back("schema_version is not " + std::string(kBenchSchema));
  need(r, "config", is_object, "an object");
  need(r, "artifacts", is_object, "an object");
  if (need(r, "dataset", is_object, "an object")) {
    need(r.at("dataset"), "name", is_string, "a string");
    need(r.at("dataset"), "n_samples", is_count, "a count");
    need(r.at("dataset"), "n_features", is_count, "a count");
  }
  std::string split_hash;
  if (need(r, "split", is_object, "an object") && need(r.at("split"), "test_row_hash", is_string, "a string"))
    split_hash = r.at("split").at("test_row_hash").get<std::string>();
  if (need(r, "methods", is_object, "an object")) {
    for (const auto& [name, m] : r.at("methods").items()) {
      if (std::find(kAllMethods.begin(), kAllMethods.end(), name) == kAllMethods.end())
        problems.push_back("unknown method '" + name + "'");
      if (!need(m, "status", is_string, "a string")) continue;
      if (m.at("status") == "failed") {
        need(m, "error", is_string, "a string");
        continue;
      }
      if (m.at("status") != "ok") problems.push_back(name + ": status must be ok or failed");
      need(m, "accuracy", is_unit, "a number in [0, 1]");
      if (need(m, "test_row_hash", is_string, "a string") && m.at("test_row_hash") != split_hash)
        problems.push_back(name + ": evaluated on a different split");
      if (name != "whole_set" && !(m.contains("views") && m.at("views").is_array()))
        problems.push_back(name + ": 'views' missing");
    }
  }
  return problems;
}

}  // namespace mvfc
