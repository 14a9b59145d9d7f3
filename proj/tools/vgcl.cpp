// Copyright 2026 The VGCL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vgcl/commands.hpp"

namespace {

using vgcl::fs::path;

path dataset_dir(const path& flag, const std::string& dataset) {
  if (!flag.empty()) return flag;
  if (dataset.empty()) throw vgcl::Error("--data is required when the config names no dataset");
  return vgcl::default_dataset_dir(dataset);
}

vgcl::RunConfig load_config(const path& file, const std::optional<std::uint64_t>& seed,
                            const std::optional<int>& epochs, bool strict) {
  if (!vgcl::fs::exists(file)) throw vgcl::Error("config file not found: " + file.string());
  vgcl::RunConfig config = vgcl::load_run_config(file);
  if (seed) config.train.seed = *seed;
  if (epochs) config.train.epochs = *epochs;
  if (strict) config.train.strict_deterministic = true;
  config.validate();
  return config;
}

std::string checkpoint_dataset(const path& checkpoint) {
  return vgcl::load_checkpoint(checkpoint).dataset;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational graph contrastive learning"};
  app.require_subcommand(1);

  path config_file, data, out, checkpoint, scores_file, probe_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  bool strict = false;

  auto* train = app.add_subcommand("train", "Train an encoder");
  train->add_option("--config", config_file, "Run configuration JSON")->required();
  train->add_option("--data", data, "Dataset directory (default $VGCL_DATA_DIR/<dataset>)");
  train->add_option("--out", out, "Output directory")->required();
  train->add_option("--seed", seed, "Override the configured seed");
  train->add_option("--epochs", epochs, "Override the configured epoch count");
  train->add_flag("--strict", strict, "Write zero timings for byte-identical logs");

  auto* resume = app.add_subcommand("resume", "Continue training from a checkpoint");
  resume->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  resume->add_option("--config", config_file, "Run configuration JSON")->required();
  resume->add_option("--data", data, "Dataset directory");
  resume->add_option("--out", out, "Output directory");
  resume->add_option("--seed", seed, "Override the configured seed");
  resume->add_option("--epochs", epochs, "Override the configured epoch count");
  resume->add_flag("--strict", strict, "Write zero timings for byte-identical logs");

  int samples = 100;
  auto* embed = app.add_subcommand("embed", "Write node embeddings");
  embed->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  embed->add_option("--data", data, "Dataset directory");
  embed->add_option("--out", out, "Output directory")->required();
  embed->add_option("--samples", samples, "Weight samples averaged per embedding")->check(CLI::PositiveNumber);

  vgcl::EvalConfig eval;
  auto* probe = app.add_subcommand("probe", "Linear-probe evaluation over random splits");
  probe->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  probe->add_option("--data", data, "Dataset directory");
  probe->add_option("--out", out, "Output directory")->required();
  probe->add_option("--runs", eval.runs, "Number of random splits")->check(CLI::PositiveNumber);
  probe->add_option("--samples", eval.samples, "Weight samples averaged per embedding")->check(CLI::PositiveNumber);
  probe->add_flag("--standardize", eval.standardize, "Standardize embeddings with train-split statistics");

  std::string measure = "all";
  int draws = 50;
  auto* score = app.add_subcommand("score", "Per-node uncertainty scores");
  score->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  score->add_option("--data", data, "Dataset directory");
  score->add_option("--out", out, "Output directory")->required();
  score->add_option("--measure", measure, "all|cmds|astd|astd_norm|psfv|likelihood|waic");
  score->add_option("--draws", draws, "Joint augmentation and weight draws");

  vgcl::RetentionRequest retention;
  std::string orientation;
  path retention_out = "retention.csv";
  auto* retain = app.add_subcommand("retention", "Retention curve of a score ordering");
  retain->add_option("--scores", retention.scores, "scores.tsv")->required();
  retain->add_option("--probe-result", retention.probe_results, "probe_results.json")->required();
  retain->add_option("--measure", retention.measure, "Score column");
  retain->add_option("--split", retention.split, "Probe run whose test split is ranked");
  retain->add_option("--orientation", orientation, "Expected orientation: certain|uncertain");
  retain->add_option("--out", retention_out, "Output CSV");

  vgcl::ReproduceRequest reproduce;
  auto* repro = app.add_subcommand("reproduce", "Train, probe, score and rank with a shipped preset");
  repro->add_option("--dataset", reproduce.dataset, "cora|citeseer|pubmed")
      ->required()
      ->check(CLI::IsMember({"cora", "citeseer", "pubmed"}));
  repro->add_option("--model", reproduce.model, "infonce|vi|vgcl")
      ->required()
      ->check(CLI::IsMember({"infonce", "vi", "vgcl"}));
  repro->add_option("--data", reproduce.data_dir, "Dataset directory (default $VGCL_DATA_DIR/<dataset>)");
  repro->add_option("--out", reproduce.out_dir, "Output directory")->required();
  repro->add_option("--seed", reproduce.seed, "Override the preset seed");
  repro->add_option("--epochs", reproduce.epochs, "Override the preset epoch count");
  repro->add_flag("--strict", reproduce.strict, "Write zero timings for byte-identical logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*train) {
      const vgcl::RunConfig config = load_config(config_file, seed, epochs, strict);
      const vgcl::Graph graph = vgcl::load_dataset(dataset_dir(data, config.dataset));
      const vgcl::TrainResult result = vgcl::run_train(graph, config, out);
      std::cout << "best epoch " << result.log.best_epoch << ", checkpoint in " << out.string() << "\n";
    } else if (*resume) {
      const vgcl::RunConfig config = load_config(config_file, seed, epochs, strict);
      const vgcl::Graph graph = vgcl::load_dataset(dataset_dir(data, config.dataset));
      const vgcl::TrainResult result = vgcl::resume(graph, config.train, checkpoint, out);
      std::cout << "best epoch " << result.log.best_epoch << "\n";
    } else if (*embed) {
      const vgcl::Graph graph = vgcl::load_dataset(dataset_dir(data, checkpoint_dataset(checkpoint)));
      vgcl::run_embed(checkpoint, graph, samples, out);
    } else if (*probe) {
      const vgcl::Graph graph = vgcl::load_dataset(dataset_dir(data, checkpoint_dataset(checkpoint)));
      const vgcl::EvaluationSummary summary = vgcl::run_probe(checkpoint, graph, eval, out);
      std::cout << "accuracy " << 100.0 * summary.mean << " +- " << 100.0 * summary.standard_error << " over "
                << summary.runs.size() << " splits\n";
    } else if (*score) {
      const vgcl::Graph graph = vgcl::load_dataset(dataset_dir(data, checkpoint_dataset(checkpoint)));
      vgcl::run_score(checkpoint, graph, measure, draws, out);
    } else if (*retain) {
      if (!orientation.empty()) retention.orientation = vgcl::orientation_from_string(orientation);
      vgcl::run_retention(retention, retention_out);
    } else if (*repro) {
      std::cout << vgcl::run_reproduce(reproduce).line() << "\n";
    }
  } catch (const vgcl::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
