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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vgcl/graphio.hpp"
#include "vgcl/model.hpp"

namespace vgcl {

/// Encoder outputs of the unaugmented graph, averaged over weight samples.
struct EmbeddingSet {
  Matrix embeddings;
  int samples = 1;
  std::string provenance;
};

/// Averages encoder outputs over `samples` weight draws; deterministic models use one pass.
EmbeddingSet extract_embeddings(const ModelParams& params, const Graph& graph, int samples, Rng& rng,
                                std::string provenance = {});

struct ProbeConfig {
  /// Regularization grid; each value is divided by the training-set size.
  std::vector<double> lambdas{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  double grad_tolerance = 1e-5;
  int max_iterations = 5000;
  /// Standardize features with training-split statistics.
  bool standardize = false;
};

struct ProbeResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double validation_accuracy = 0.0;
  /// Grid value (before division by the training-set size).
  double lambda = 0.0;
  std::vector<Index> test_nodes;
  std::vector<std::uint8_t> correct;
};

/// Multinomial logistic regression with an unpenalized bias, trained by full-batch
/// gradient descent with backtracking line search.
struct LogisticModel {
  Matrix weights;  // d x C
  VectorXd bias;   // C
  int iterations = 0;
  double gradient_norm = 0.0;

  Eigen::VectorXi predict(const Matrix& x) const;
};

/// Minimizes mean cross-entropy + penalty/2 * ||W||^2 over the rows `rows` of x.
LogisticModel fit_logistic(const Matrix& x, const Eigen::VectorXi& labels, Index num_classes,
                           const std::vector<Index>& rows, double penalty, const ProbeConfig& config);

/// Mean log-likelihood of the labels of `rows` under `model`.
double mean_log_likelihood(const LogisticModel& model, const Matrix& x, const Eigen::VectorXi& labels,
                           const std::vector<Index>& rows);

/// Sweeps the lambda grid on the train split, keeps the best validation accuracy
/// (ties go to the larger lambda) and scores the test split.
ProbeResult fit_probe(const Matrix& embeddings, const Eigen::VectorXi& labels, Index num_classes,
                      const SplitSpec& split, const ProbeConfig& config = {});

struct EvaluationSummary {
  std::vector<ProbeResult> runs;
  double mean = 0.0;
  /// Sample standard deviation over runs divided by sqrt(runs); 0 for one run.
  double standard_error = 0.0;
};

/// Probes `runs` fresh splits with seeds 0..runs-1 on fixed embeddings.
EvaluationSummary evaluate(const Matrix& embeddings, const Eigen::VectorXi& labels, Index num_classes, int runs,
                           const ProbeConfig& config = {});

nlohmann::json to_json(const EvaluationSummary& summary);
EvaluationSummary evaluation_from_json(const nlohmann::json& doc);

}  // namespace vgcl
