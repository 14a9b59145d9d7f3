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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vgcl/config.hpp"
#include "vgcl/eval.hpp"
#include "vgcl/train.hpp"
#include "vgcl/uncertainty.hpp"

namespace vgcl {

namespace fs = std::filesystem;

/// `$VGCL_DATA_DIR/<dataset>`, or `data/<dataset>` when the variable is unset.
fs::path default_dataset_dir(const std::string& dataset);

/// Names of the shipped presets, e.g. "cora_vgcl".
std::vector<std::string> preset_names();
/// Raw JSON text of a shipped preset.
std::string preset_text(const std::string& name);
RunConfig preset(const std::string& dataset, const std::string& model);

std::string embeddings_tsv(const Matrix& embeddings);

TrainResult run_train(const Graph& graph, const RunConfig& config, const fs::path& out_dir);

/// Embeddings of the unaugmented graph averaged over `samples` weight draws.
EmbeddingSet run_embed(const fs::path& checkpoint_dir, const Graph& graph, int samples, const fs::path& out_dir);

/// Writes embeddings.tsv and probe_results.json into `out_dir` (skipped when empty).
EvaluationSummary run_probe(const fs::path& checkpoint_dir, const Graph& graph, const EvalConfig& eval,
                            const fs::path& out_dir);

/// `measure` is "all" or one name from measure_names(). Writes scores.tsv.
std::vector<ScoreVector> run_score(const fs::path& checkpoint_dir, const Graph& graph, const std::string& measure,
                                   int draws, const fs::path& out_dir);

struct RetentionRequest {
  fs::path scores;
  fs::path probe_results;
  std::string measure = "cmds";
  /// Index into the probe runs whose test split is ranked.
  int split = 0;
  /// When set, must agree with the orientation recorded in the scores file.
  std::optional<Orientation> orientation;
};

RetentionCurve run_retention(const RetentionRequest& request, const fs::path& out_csv);

struct ReproduceRequest {
  std::string dataset;
  std::string model;
  fs::path data_dir;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  bool strict = false;
};

struct ReproduceSummary {
  std::string dataset;
  std::string model;
  EvaluationSummary probe;
  double overall_accuracy = 0.0;
  double cmds_at_10 = 0.0;
  double cmds_area = 0.0;
  double random_area = 0.0;

  std::string line() const;
};

/// train -> probe -> score -> retention with a shipped preset, all under out_dir.
ReproduceSummary run_reproduce(const ReproduceRequest& request);

}  // namespace vgcl
