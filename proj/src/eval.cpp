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

#include "vgcl/eval.hpp"

#include <cmath>
#include <iostream>

#include "vgcl/augment.hpp"

namespace vgcl {

EmbeddingSet extract_embeddings(const ModelParams& params, const Graph& graph, int samples, Rng& rng,
                                std::string provenance) {
  if (samples < 1) throw Error("extract_embeddings: samples must be >= 1");
  const GraphView view = identity_view(graph);
  EmbeddingSet out;
  out.provenance = std::move(provenance);
  if (!params.variational()) {
    out.embeddings = encode(view.adjacency, view.features, params.mean);
    out.samples = 1;
    return out;
  }
  out.embeddings = Matrix::Zero(graph.num_nodes(), params.config.out);
  for (int s = 0; s < samples; ++s) {
    const WeightSample sample = sample_weights(params, rng);
    out.embeddings += encode(view.adjacency, view.features, sample.weights);
  }
  out.embeddings /= static_cast<double>(samples);
  out.samples = samples;
  return out;
}

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

/// Mean cross-entropy of softmax(x W + b) and, optionally, its gradient.
double cross_entropy(const Matrix& x, const Eigen::VectorXi& y, const Matrix& w, const VectorXd& b, Matrix* grad_w,
                     VectorXd* grad_b) {
  const Index m = x.rows();
  Matrix logits = x * w;
  logits.rowwise() += b.transpose();
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double peak = logits.row(i).maxCoeff();
    logits.row(i).array() -= peak;
    const double log_norm = std::log(logits.row(i).array().exp().sum());
    total += log_norm - logits(i, y[i]);
    if (grad_w) {
      logits.row(i) = (logits.row(i).array() - log_norm).exp().matrix();
      logits(i, y[i]) -= 1.0;
    }
  }
  if (grad_w) {
    *grad_w = x.transpose() * logits / static_cast<double>(m);
    *grad_b = logits.colwise().sum().transpose() / static_cast<double>(m);
  }
  return total / static_cast<double>(m);
}

}  // namespace

Eigen::VectorXi LogisticModel::predict(const Matrix& x) const {
  Matrix logits = x * weights;
  logits.rowwise() += bias.transpose();
  Eigen::VectorXi out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    Index best = 0;
    logits.row(i).maxCoeff(&best);
    out[i] = static_cast<int>(best);
  }
  return out;
}

LogisticModel fit_logistic(const Matrix& x, const Eigen::VectorXi& labels, Index num_classes,
                           const std::vector<Index>& rows, double penalty, const ProbeConfig& config) {
  if (rows.empty()) throw Error("fit_logistic: empty training set");
  const Matrix xs = gather_rows(x, rows);
  Eigen::VectorXi ys(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) ys[static_cast<Index>(i)] = labels[rows[i]];

  LogisticModel model;
  model.weights = Matrix::Zero(x.cols(), num_classes);
  model.bias = VectorXd::Zero(num_classes);
  auto objective = [&](const Matrix& w, const VectorXd& b, Matrix* gw, VectorXd* gb) {
    double value = cross_entropy(xs, ys, w, b, gw, gb) + 0.5 * penalty * w.squaredNorm();
    if (gw) *gw += penalty * w;
    return value;
  };

  Matrix grad_w;
  VectorXd grad_b;
  double value = objective(model.weights, model.bias, &grad_w, &grad_b);
  double step = 1.0;
  int iteration = 0;
  for (; iteration < config.max_iterations; ++iteration) {
    const double grad_sq = grad_w.squaredNorm() + grad_b.squaredNorm();
    model.gradient_norm = std::sqrt(grad_sq);
    if (model.gradient_norm <= config.grad_tolerance) break;
    step *= 2.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Matrix w = model.weights - step * grad_w;
      const VectorXd b = model.bias - step * grad_b;
      const double candidate = objective(w, b, nullptr, nullptr);
      if (candidate <= value - 0.5 * step * grad_sq) {
        model.weights = w;
        model.bias = b;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    value = objective(model.weights, model.bias, &grad_w, &grad_b);
  }
  model.iterations = iteration;
  model.gradient_norm = std::sqrt(grad_w.squaredNorm() + grad_b.squaredNorm());
  return model;
}

double mean_log_likelihood(const LogisticModel& model, const Matrix& x, const Eigen::VectorXi& labels,
                           const std::vector<Index>& rows) {
  const Matrix xs = gather_rows(x, rows);
  Eigen::VectorXi ys(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) ys[static_cast<Index>(i)] = labels[rows[i]];
  return -cross_entropy(xs, ys, model.weights, model.bias, nullptr, nullptr);
}

namespace {

double accuracy_on(const LogisticModel& model, const Matrix& x, const Eigen::VectorXi& labels,
                   const std::vector<Index>& rows, std::vector<std::uint8_t>* correct) {
  if (rows.empty()) return 0.0;
  const Eigen::VectorXi predicted = model.predict(gather_rows(x, rows));
  Index hits = 0;
  if (correct) correct->assign(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool hit = predicted[static_cast<Index>(i)] == labels[rows[i]];
    hits += hit ? 1 : 0;
    if (correct) (*correct)[i] = hit ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace

ProbeResult fit_probe(const Matrix& embeddings, const Eigen::VectorXi& labels, Index num_classes,
                      const SplitSpec& split, const ProbeConfig& config) {
  if (split.train.empty() || split.test.empty()) throw Error("fit_probe: split has an empty train or test set");
  if (config.lambdas.empty()) throw Error("fit_probe: empty lambda grid");

  std::vector<char> seen(static_cast<std::size_t>(num_classes), 0);
  for (const Index i : split.train) seen[static_cast<std::size_t>(labels[i])] = 1;
  for (Index c = 0; c < num_classes; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      std::cerr << "warning: class " << c << " has no training nodes in split " << split.seed
                << "; it cannot be predicted\n";
    }
  }

  Matrix x = embeddings;
  if (config.standardize) {
    const Matrix train_rows = gather_rows(embeddings, split.train);
    const Eigen::RowVectorXd mu = train_rows.colwise().mean();
    Eigen::RowVectorXd sd = ((train_rows.rowwise() - mu).array().square().colwise().mean()).sqrt();
    sd = sd.unaryExpr([](double s) { return s > 0 ? s : 1.0; });
    x = ((embeddings.rowwise() - mu).array().rowwise() / sd.array()).matrix();
  }

  const double train_size = static_cast<double>(split.train.size());
  ProbeResult result;
  result.seed = split.seed;
  LogisticModel chosen;
  double best_val = -1.0;
  for (const double lambda : config.lambdas) {
    LogisticModel model = fit_logistic(x, labels, num_classes, split.train, lambda / train_size, config);
    const double val = split.val.empty() ? 0.0 : accuracy_on(model, x, labels, split.val, nullptr);
    if (val >= best_val) {  // later grid entries are larger, so ties go to the larger lambda
      best_val = val;
      result.lambda = lambda;
      chosen = std::move(model);
    }
  }
  result.validation_accuracy = best_val;
  result.test_nodes = split.test;
  result.accuracy = accuracy_on(chosen, x, labels, split.test, &result.correct);
  return result;
}

EvaluationSummary evaluate(const Matrix& embeddings, const Eigen::VectorXi& labels, Index num_classes, int runs,
                           const ProbeConfig& config) {
  if (runs < 1) throw Error("evaluate: runs must be >= 1");
  EvaluationSummary summary;
  for (int seed = 0; seed < runs; ++seed) {
    summary.runs.push_back(fit_probe(embeddings, labels, num_classes,
                                     make_split(embeddings.rows(), static_cast<std::uint64_t>(seed)), config));
  }
  double sum = 0.0;
  for (const auto& r : summary.runs) sum += r.accuracy;
  summary.mean = sum / runs;
  if (runs == 1) {
    std::cerr << "warning: a single probe run has no spread; standard error reported as 0\n";
    summary.standard_error = 0.0;
  } else {
    double sq = 0.0;
    for (const auto& r : summary.runs) sq += (r.accuracy - summary.mean) * (r.accuracy - summary.mean);
    summary.standard_error = std::sqrt(sq / (runs - 1)) / std::sqrt(static_cast<double>(runs));
  }
  return summary;
}

nlohmann::json to_json(const EvaluationSummary& summary) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : summary.runs) {
    runs.push_back({{"seed", r.seed},
                    {"accuracy", r.accuracy},
                    {"validation_accuracy", r.validation_accuracy},
                    {"lambda", r.lambda},
                    {"test_nodes", r.test_nodes},
                    {"correct", r.correct}});
  }
  nlohmann::json accuracies = nlohmann::json::array();
  nlohmann::json lambdas = nlohmann::json::array();
  for (const auto& r : summary.runs) {
    accuracies.push_back(r.accuracy);
    lambdas.push_back(r.lambda);
  }
  return {{"mean", summary.mean}, {"stderr", summary.standard_error}, {"accuracies", accuracies},
          {"lambdas", lambdas},   {"runs", runs}};
}

EvaluationSummary evaluation_from_json(const nlohmann::json& doc) {
  EvaluationSummary summary;
  summary.mean = doc.at("mean").get<double>();
  summary.standard_error = doc.at("stderr").get<double>();
  for (const auto& r : doc.at("runs")) {
    ProbeResult p;
    p.seed = r.at("seed").get<std::uint64_t>();
    p.accuracy = r.at("accuracy").get<double>();
    p.validation_accuracy = r.at("validation_accuracy").get<double>();
    p.lambda = r.at("lambda").get<double>();
    p.test_nodes = r.at("test_nodes").get<std::vector<Index>>();
    p.correct = r.at("correct").get<std::vector<std::uint8_t>>();
    summary.runs.push_back(std::move(p));
  }
  return summary;
}

}  // namespace vgcl
