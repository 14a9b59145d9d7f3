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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vgcl/augment.hpp"
#include "vgcl/error.hpp"
#include "vgcl/model.hpp"
#include "vgcl/objective.hpp"

namespace vgcl {

enum class Orientation {
  higher_is_certain,
  higher_is_uncertain,
};

std::string to_string(Orientation orientation);
Orientation orientation_from_string(const std::string& text);

struct ScoreVector {
  std::string measure;
  VectorXd values;
  Orientation orientation = Orientation::higher_is_certain;
};

/// What varies between the draws of an embedding stack.
enum class VariationSource { none, augmentations, weights, both };

std::string to_string(VariationSource source);

struct EmbeddingSamples {
  std::vector<Matrix> draws;  // M matrices of shape n x d
  VariationSource source = VariationSource::none;
};

/// L(j, i): likelihood proxy of node i under draw j.
struct LikelihoodMatrix {
  Matrix values;  // M x n
  std::vector<std::uint64_t> augment_draw_ids;
  std::vector<std::uint64_t> weight_draw_ids;
};

struct DrawSet {
  LikelihoodMatrix likelihood;
  /// Unaugmented graph under each weight sample.
  EmbeddingSamples weight_embeddings;
  /// First augmented view under each (augmentation, weight) draw.
  EmbeddingSamples view_embeddings;
};

/// M joint (view pair, weight sample) draws. Likelihoods are exp(-per-node NT-Xent).
DrawSet collect_draws(const ModelParams& params, const Graph& graph, const AugmentConfig& augment,
                      const ContrastiveConfig& contrastive, int draws, Rng& augment_rng, Rng& weight_rng);

/// 1 / (M * sum_j l_j^2) of the column-normalized likelihoods `l` of each column.
template <typename Derived>
VectorXd cmds_kernel(const Eigen::MatrixBase<Derived>& likelihood) {
  const Index m = likelihood.rows();
  VectorXd out(likelihood.cols());
  for (Index i = 0; i < likelihood.cols(); ++i) {
    const double total = likelihood.col(i).sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw Error("cmds: likelihoods of node " + std::to_string(i) + " cannot be normalized");
    }
    const double concentration = (likelihood.col(i) / total).squaredNorm();
    out[i] = 1.0 / (static_cast<double>(m) * concentration);
  }
  return out;
}

/// Mean over features of the per-(node, feature) spread across draws, with
/// `spread` applied to the population variance.
template <typename Spread>
VectorXd feature_spread(const std::vector<Matrix>& draws, Spread spread) {
  if (draws.empty()) throw Error("embedding stack is empty");
  const double m = static_cast<double>(draws.size());
  Matrix mean = Matrix::Zero(draws.front().rows(), draws.front().cols());
  for (const Matrix& d : draws) {
    if (d.rows() != mean.rows() || d.cols() != mean.cols()) throw Error("embedding draws differ in shape");
    mean += d;
  }
  mean /= m;
  Matrix variance = Matrix::Zero(mean.rows(), mean.cols());
  for (const Matrix& d : draws) variance.array() += (d - mean).array().square();
  variance /= m;
  return variance.unaryExpr(spread).rowwise().mean();
}

ScoreVector cmds(const LikelihoodMatrix& likelihood);
ScoreVector expected_likelihood(const LikelihoodMatrix& likelihood);
ScoreVector waic(const LikelihoodMatrix& likelihood);
ScoreVector astd(const EmbeddingSamples& samples);
ScoreVector astd_norm(const EmbeddingSamples& samples);
ScoreVector psfv(const EmbeddingSamples& samples);

/// Every measure applicable to `draws`, in a fixed order.
std::vector<ScoreVector> all_scores(const DrawSet& draws);
ScoreVector score(const DrawSet& draws, const std::string& measure);
const std::vector<std::string>& measure_names();

struct RetentionPoint {
  double fraction = 0.0;
  double accuracy = 0.0;
};

using RetentionCurve = std::vector<RetentionPoint>;

/// Admits test nodes most-certain-first (ties by node index) and reports the
/// running accuracy after each admission.
RetentionCurve retention_curve(const VectorXd& scores, Orientation orientation, const std::vector<Index>& test_nodes,
                               const std::vector<std::uint8_t>& correct);

/// Mean running accuracy over the curve points.
double retention_area(const RetentionCurve& curve);

/// Accuracy after admitting the first `fraction` of the test nodes (rounded up, at least one).
double retention_at(const RetentionCurve& curve, double fraction);

/// Mean retention area over `count` uniformly random admission orders.
double random_retention_area(const std::vector<std::uint8_t>& correct, int count, Rng& rng);

std::string scores_tsv(const std::vector<ScoreVector>& scores);
std::vector<ScoreVector> parse_scores_tsv(const std::string& path);
std::string retention_csv(const RetentionCurve& curve);

}  // namespace vgcl
