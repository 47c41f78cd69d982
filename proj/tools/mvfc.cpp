// mvfc: command-line front end for multi-view feature partitioning.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal error.
// MVFC_OUTPUT_DIR sets the default output directory.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mvfc/mvfc.hpp"

namespace fs = std::filesystem;
using namespace mvfc;

namespace {

fs::path default_output_dir() {
  if (const char* env = std::getenv("MVFC_OUTPUT_DIR"); env && *env) return env;
  return "mvfc-out";
}

RunConfig load_run_config(const std::string& path) {
  if (path.empty()) {
    RunConfig c;
    c.output_dir = default_output_dir();
    c.derive_seeds();
    return c;
  }
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  RunConfig c = run_config_from_json(doc);
  if (!doc.contains("output_dir")) c.output_dir = default_output_dir();
  return c;
}

// Flags shared by every subcommand that reads a dataset.
struct DataFlags {
  std::string path;
  std::string label = "label";
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--data", flags.path, "Input CSV (header row required)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--label", flags.label, "Label column name or zero-based index")->capture_default_str();
}

Dataset load_data(const DataFlags& flags) {
  const bool numeric = !flags.label.empty() && flags.label.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) return load_csv(flags.path, static_cast<std::size_t>(std::stoull(flags.label)));
  return load_csv(flags.path, flags.label);
}

template <typename T>
void override_if(const CLI::Option* opt, T& target, const T& value) {
  if (opt->count() > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view ensemble classification by feature-set partitioning"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Run config file (JSON); flags override its values");

  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  auto* out_opt = app.add_option("--out-dir", out_dir, "Output directory (default $MVFC_OUTPUT_DIR or ./mvfc-out)");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset as canonical CSV");
  SyntheticSpec sspec;
  BlockSpec bspec;
  bool blocks = false;
  std::string synth_out;
  auto* s_seed = synth->add_option("--data-seed", sspec.seed, "Generator seed (default derived from --seed)");
  synth->add_option("--n-samples", sspec.n_samples)->capture_default_str();
  synth->add_option("--n-features", sspec.n_features)->capture_default_str();
  synth->add_option("--n-informative", sspec.n_informative)->capture_default_str();
  synth->add_option("--n-redundant", sspec.n_redundant)->capture_default_str();
  synth->add_option("--class-sep", sspec.class_sep)->capture_default_str();
  synth->add_option("--flip-y", sspec.flip_y)->capture_default_str();
  synth->add_flag("--blocks", blocks, "Planted block dataset instead of Gaussian clusters");
  synth->add_option("--n-blocks", bspec.n_blocks)->capture_default_str();
  synth->add_option("--block-size", bspec.block_size)->capture_default_str();
  synth->add_option("--agreement", bspec.agreement)->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV path (default <out-dir>/synthetic.csv)");

  // collab
  auto* collab = app.add_subcommand("collab", "Compute the feature collaboration matrix");
  DataFlags collab_data;
  add_data_flags(collab, collab_data);
  std::size_t folds = 5;
  double tau = 0.01;
  auto* folds_opt = collab->add_option("--folds", folds, "Cross-validation folds");
  auto* tau_opt = collab->add_option("--tau", tau, "Edge threshold recorded with the matrix");

  // ig
  auto* ig = app.add_subcommand("ig", "Compute the interaction-gain matrix");
  DataFlags ig_data;
  add_data_flags(ig, ig_data);
  std::size_t bins = 8;
  auto* bins_opt = ig->add_option("--bins", bins, "Equal-frequency bins per feature");

  // views
  auto* views = app.add_subcommand("views", "Detect views in a matrix's feature graph");
  std::string matrix_path, views_out, backend_name;
  double views_tau = 0.01;
  std::size_t max_iters = 100;
  bool floor_neg = false;
  views->add_option("--matrix", matrix_path, "Matrix CSV (collab or ig)")->required()->check(CLI::ExistingFile);
  auto* vtau_opt = views->add_option("--tau", views_tau, "Edge threshold");
  auto* backend_opt = views->add_option("--backend", backend_name,
                                        "label_propagation | greedy_modularity | exhaustive_modularity");
  auto* iters_opt = views->add_option("--max-iters", max_iters, "Label propagation sweep limit");
  views->add_flag("--floor-negative", floor_neg, "Treat negative entries as 0 (interaction gain)");
  views->add_option("--out", views_out, "Partition JSON path (default <out-dir>/views.json)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a multi-view ensemble");
  DataFlags train_data;
  add_data_flags(train_cmd, train_data);
  std::string partition_path, model_out, mode_name;
  std::size_t rounds = 10;
  train_cmd->add_option("--views", partition_path, "Partition JSON (default: one view of all features)")
      ->check(CLI::ExistingFile);
  auto* rounds_opt = train_cmd->add_option("--rounds", rounds, "Boosting rounds");
  auto* mode_opt = train_cmd->add_option("--mode", mode_name, "boosted_pool | static_fusion");
  train_cmd->add_option("--out", model_out, "Model JSON path (default <out-dir>/model.json)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained ensemble on a dataset");
  DataFlags eval_data;
  add_data_flags(eval_cmd, eval_data);
  std::string model_path, report_out;
  eval_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", report_out, "Report JSON path (default <out-dir>/eval.json)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the four-way comparison on one split");
  std::string methods_csv;
  auto* methods_opt = bench->add_option("--methods", methods_csv, "Comma-separated subset of "
                                        "whole_set,interaction_gain,collaboration,exhaustive");
  auto* bench_backend_opt = bench->add_option("--backend", backend_name, "Community detection backend");
  auto* bench_rounds_opt = bench->add_option("--rounds", rounds, "Boosting rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = load_run_config(config_path);
    if (seed_opt->count()) {
      cfg.seed = seed;
      cfg.derive_seeds();
    }
    override_if(threads_opt, cfg.threads, threads);
    if (out_opt->count()) cfg.output_dir = out_dir;

    if (*synth) {
      fs::path path = synth_out.empty() ? cfg.output_dir / "synthetic.csv" : fs::path(synth_out);
      Dataset ds = [&] {
        if (blocks) {
          bspec.n_samples = sspec.n_samples;
          bspec.seed = s_seed->count() ? sspec.seed : derive_seed(cfg.seed, "synthetic");
          return generate_blocks(bspec);
        }
        if (!s_seed->count()) sspec.seed = derive_seed(cfg.seed, "synthetic");
        return generate_synthetic(sspec);
      }();
      write_file_atomic(path, to_csv_string(ds));
      const auto& meta = *ds.meta();
      json info{{"path", path.string()},
                {"n_samples", ds.n_samples()},
                {"n_features", ds.n_features()},
                {"seed", meta.seed},
                {"informative", meta.informative},
                {"redundant", meta.redundant},
                {"noise", meta.noise}};
      if (!meta.blocks.empty()) info["blocks"] = meta.blocks;
      std::cout << info.dump(2) << '\n';
    } else if (*collab) {
      override_if(folds_opt, cfg.collab.k_folds, folds);
      override_if(tau_opt, cfg.collab.edge_threshold, tau);
      cfg.collab.validate();
      const Dataset ds = load_data(collab_data);
      std::vector<PairErrors> pairs;
      const auto cm = collab_matrix(ds, cfg.collab, cfg.threads, &pairs);
      write_file_atomic(cfg.output_dir / "collab_matrix.csv", matrix_to_csv(cm.values, ds.feature_names()));
      write_file_atomic(cfg.output_dir / "collab_matrix.json",
                        to_json(cm, ds.feature_names(), cfg.collab, pairs).dump(2) + "\n");
      std::cout << "wrote " << (cfg.output_dir / "collab_matrix.csv").string() << " and collab_matrix.json"
                << " (tau=" << cfg.collab.edge_threshold << ", folds=" << cfg.collab.k_folds
                << ", seed=" << cfg.collab.seed << ")\n";
    } else if (*ig) {
      override_if(bins_opt, cfg.discretization.n_bins, bins);
      const Dataset ds = load_data(ig_data);
      const Matrix m = interaction_gain_matrix(ds, cfg.discretization, cfg.threads);
      write_file_atomic(cfg.output_dir / "ig_matrix.csv", matrix_to_csv(m, ds.feature_names()));
      json doc{{"schema", "mvfc.matrix/1"},
               {"kind", "interaction_gain"},
               {"names", ds.feature_names()},
               {"values", matrix_rows(m)},
               {"n_bins", cfg.discretization.n_bins},
               {"negative_values_floored_for_edges", true}};
      write_file_atomic(cfg.output_dir / "ig_matrix.json", doc.dump(2) + "\n");
      std::cout << "wrote " << (cfg.output_dir / "ig_matrix.csv").string() << " and ig_matrix.json (bins="
                << cfg.discretization.n_bins << ")\n";
    } else if (*views) {
      double edge_tau = cfg.collab.edge_threshold;
      override_if(vtau_opt, edge_tau, views_tau);
      if (backend_opt->count()) cfg.community.backend = parse_backend(backend_name);
      override_if(iters_opt, cfg.community.max_iters, max_iters);
      auto named = load_matrix_csv(matrix_path);
      const Matrix m = floor_neg ? floor_negative(named.values) : named.values;
      const auto graph = build_graph(m, edge_tau);
      const auto partition = detect_views(graph, cfg.community);
      json doc = to_json(partition);
      doc["names"] = named.names;
      doc["backend"] = to_string(cfg.community.backend);
      doc["edge_threshold"] = edge_tau;
      doc["modularity"] = modularity(graph, partition);
      const fs::path path = views_out.empty() ? cfg.output_dir / "views.json" : fs::path(views_out);
      write_file_atomic(path, doc.dump(2) + "\n");
      write_file_atomic(path.parent_path() / (path.stem().string() + "_graph.csv"), graph_to_csv(graph));
      std::cout << partition.to_string() << "  Q=" << doc["modularity"].get<double>() << '\n';
    } else if (*train_cmd) {
      override_if(rounds_opt, cfg.boost.rounds, rounds);
      if (mode_opt->count()) cfg.boost.mode = parse_fusion_mode(mode_name);
      const Dataset ds = load_data(train_data);
      const ViewPartition partition = partition_path.empty()
                                          ? ViewPartition::single_view(ds.n_features())
                                          : partition_from_json(json::parse(read_file(partition_path)));
      const auto model = train_ensemble(ds, partition, cfg.boost, cfg.threads);
      const fs::path path = model_out.empty() ? cfg.output_dir / "model.json" : fs::path(model_out);
      write_file_atomic(path, to_json(model, cfg.boost).dump(2) + "\n");
      std::cout << "wrote " << path.string() << " (" << model.rounds.size() << " rounds, "
                << to_string(model.mode) << ")\n";
    } else if (*eval_cmd) {
      const auto model = ensemble_from_json(json::parse(read_file(model_path)));
      const Dataset ds = load_data(eval_data);
      const auto report = evaluate(model, ds);
      const fs::path path = report_out.empty() ? cfg.output_dir / "eval.json" : fs::path(report_out);
      write_file_atomic(path, to_json(report).dump(2) + "\n");
      write_file_atomic(path.parent_path() / (path.stem().string() + ".csv"), eval_report_csv(report));
      std::cout << "accuracy " << report.accuracy << " on " << report.n_samples << " samples\n";
    } else if (*bench) {
      if (methods_opt->count()) {
        cfg.methods.clear();
        std::stringstream ss(methods_csv);
        for (std::string m; std::getline(ss, m, ',');)
          if (!m.empty()) cfg.methods.push_back(m);
      }
      if (bench_backend_opt->count()) cfg.community.backend = parse_backend(backend_name);
      override_if(bench_rounds_opt, cfg.boost.rounds, rounds);
      const auto outcome = run_bench(cfg);
      std::cout << outcome.table;
      std::cout << "report: " << (cfg.output_dir / "report.json").string() << '\n';
      if (!outcome.all_ok) {
        std::cerr << "one or more methods failed; see report.json\n";
        return 2;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
