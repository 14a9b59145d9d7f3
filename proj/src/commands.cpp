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

#include "vgcl/commands.hpp"

#include <cstdlib>
#include <iostream>
#include <map>

#include "vgcl/text_io.hpp"

namespace vgcl {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table{
#include "vgcl_presets.inc"
  };
  return table;
}

Checkpoint load_for(const fs::path& checkpoint_dir, const Graph& graph) {
  Checkpoint checkpoint = load_checkpoint(checkpoint_dir);
  if (checkpoint.state.params.config.in_dim != graph.num_features()) {
    throw Error("checkpoint expects " + std::to_string(checkpoint.state.params.config.in_dim) +
                " features but the dataset has " + std::to_string(graph.num_features()));
  }
  return checkpoint;
}

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

}  // namespace

fs::path default_dataset_dir(const std::string& dataset) {
  const char* root = std::getenv("VGCL_DATA_DIR");
  return fs::path(root && *root ? root : "data") / dataset;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw Error("no preset named '" + name + "'");
  return it->second;
}

RunConfig preset(const std::string& dataset, const std::string& model) {
  return parse_run_config(nlohmann::json::parse(preset_text(dataset + "_" + model)));
}

std::string embeddings_tsv(const Matrix& embeddings) {
  std::string out;
  for (Index i = 0; i < embeddings.rows(); ++i) {
    for (Index c = 0; c < embeddings.cols(); ++c) {
      if (c) out += '\t';
      out += text::format_double(embeddings(i, c));
    }
    out += '\n';
  }
  return out;
}

TrainResult run_train(const Graph& graph, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  ensure_dir(out_dir);
  return train(graph, config.train, out_dir);
}

EmbeddingSet run_embed(const fs::path& checkpoint_dir, const Graph& graph, int samples, const fs::path& out_dir) {
  const Checkpoint checkpoint = load_for(checkpoint_dir, graph);
  Rng rng(checkpoint.config.seed, "embed");
  const bool variational = checkpoint.state.params.variational();
  EmbeddingSet set = extract_embeddings(checkpoint.state.params, graph, variational ? samples : 1, rng,
                                        variational ? "mean over weight samples" : "deterministic encoder");
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    text::write_file(out_dir / "embeddings.tsv", embeddings_tsv(set.embeddings));
  }
  return set;
}

EvaluationSummary run_probe(const fs::path& checkpoint_dir, const Graph& graph, const EvalConfig& eval,
                            const fs::path& out_dir) {
  const EmbeddingSet set = run_embed(checkpoint_dir, graph, eval.samples, out_dir);
  ProbeConfig probe;
  probe.standardize = eval.standardize;
  EvaluationSummary summary = evaluate(set.embeddings, graph.labels, graph.num_classes, eval.runs, probe);
  if (!out_dir.empty()) {
    nlohmann::json doc = to_json(summary);
    doc["embedding_samples"] = set.samples;
    doc["embedding_source"] = set.provenance;
    text::write_file(out_dir / "probe_results.json", doc.dump(2) + "\n");
  }
  return summary;
}

std::vector<ScoreVector> run_score(const fs::path& checkpoint_dir, const Graph& graph, const std::string& measure,
                                   int draws, const fs::path& out_dir) {
  const Checkpoint checkpoint = load_for(checkpoint_dir, graph);
  if (measure != "all") {
    bool known = false;
    for (const auto& name : measure_names()) known = known || name == measure;
    if (!known) throw Error("unknown measure '" + measure + "'");
    if ((measure == "astd" || measure == "astd_norm") && !checkpoint.state.params.variational()) {
      throw Error(measure + " is not applicable to a deterministic encoder: its embeddings do not vary across "
                  "weight draws");
    }
  }
  Rng augment_rng(checkpoint.config.seed, "score/augment");
  Rng weight_rng(checkpoint.config.seed, "score/weights");
  const DrawSet set = collect_draws(checkpoint.state.params, graph, checkpoint.config.augment,
                                    checkpoint.config.contrastive, draws, augment_rng, weight_rng);
  std::vector<ScoreVector> scores;
  if (measure == "all") {
    scores = all_scores(set);
  } else {
    scores.push_back(score(set, measure));
  }
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    text::write_file(out_dir / "scores.tsv", scores_tsv(scores));
  }
  return scores;
}

RetentionCurve run_retention(const RetentionRequest& request, const fs::path& out_csv) {
  const std::vector<ScoreVector> scores = parse_scores_tsv(request.scores.string());
  const ScoreVector* chosen = nullptr;
  for (const auto& s : scores) {
    if (s.measure == request.measure) chosen = &s;
  }
  if (!chosen) throw Error("scores file " + request.scores.string() + " has no column '" + request.measure + "'");
  if (request.orientation && *request.orientation != chosen->orientation) {
    throw Error("orientation mismatch: " + request.scores.string() + " records " + request.measure + " as " +
                to_string(chosen->orientation) + " but " + to_string(*request.orientation) + " was requested");
  }
  const EvaluationSummary probe =
      evaluation_from_json(nlohmann::json::parse(text::read_file(request.probe_results)));
  if (request.split < 0 || request.split >= static_cast<int>(probe.runs.size())) {
    throw Error("probe results have no split " + std::to_string(request.split));
  }
  const ProbeResult& run = probe.runs[static_cast<std::size_t>(request.split)];
  RetentionCurve curve = retention_curve(chosen->values, chosen->orientation, run.test_nodes, run.correct);
  if (!out_csv.empty()) {
    if (out_csv.has_parent_path()) ensure_dir(out_csv.parent_path());
    text::write_file(out_csv, retention_csv(curve));
  }
  return curve;
}

std::string ReproduceSummary::line() const {
  return dataset + " " + model + ": " + text::format_fixed(100.0 * probe.mean, 1) + " +- " +
         text::format_fixed(100.0 * probe.standard_error, 1) + " (" + std::to_string(probe.runs.size()) +
         " splits); cmds retention@10% " + text::format_fixed(100.0 * cmds_at_10, 1) + " vs overall " +
         text::format_fixed(100.0 * overall_accuracy, 1);
}

ReproduceSummary run_reproduce(const ReproduceRequest& request) {
  RunConfig config = preset(request.dataset, request.model);
  if (request.seed) config.train.seed = *request.seed;
  if (request.epochs) config.train.epochs = *request.epochs;
  config.train.strict_deterministic = request.strict;
  config.validate();

  const fs::path data_dir = request.data_dir.empty() ? default_dataset_dir(request.dataset) : request.data_dir;
  const Graph graph = load_dataset(data_dir);
  const fs::path& out = request.out_dir;
  ensure_dir(out);
  text::write_file(out / "config.json", to_json(config).dump(2) + "\n");

  run_train(graph, config, out);
  ReproduceSummary summary;
  summary.dataset = request.dataset;
  summary.model = request.model;
  summary.probe = run_probe(out, graph, config.eval, out);
  run_score(out, graph, "all", config.uncertainty.draws, out);

  RetentionRequest retention;
  retention.scores = out / "scores.tsv";
  retention.probe_results = out / "probe_results.json";
  const RetentionCurve curve = run_retention(retention, out / "retention.csv");
  for (const auto& s : parse_scores_tsv(retention.scores.string())) {
    if (s.measure == "cmds") continue;
    retention.measure = s.measure;
    run_retention(retention, out / ("retention_" + s.measure + ".csv"));
  }

  summary.overall_accuracy = curve.back().accuracy;
  summary.cmds_at_10 = retention_at(curve, 0.1);
  summary.cmds_area = retention_area(curve);
  Rng shuffle(config.train.seed, "retention/random");
  summary.random_area = random_retention_area(summary.probe.runs.front().correct, 100, shuffle);
  return summary;
}

}  // namespace vgcl
