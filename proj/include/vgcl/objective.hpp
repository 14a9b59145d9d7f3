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

#include <optional>
#include <string>
#include <vector>

#include "vgcl/augment.hpp"
#include "vgcl/model.hpp"

namespace vgcl {

/// Which similarities enter the NT-Xent denominator besides the positive.
enum class Negatives {
  inter_and_intra,  // other nodes of the other view and of the same view
  inter_only,       // other nodes of the other view
};

struct ContrastiveConfig {
  /// Temperature. No published value exists for this setting; 0.5 is the default.
  double tau = 0.5;
  Negatives negatives = Negatives::inter_and_intra;
  /// Graphs with more than `dense_limit` nodes evaluate the n x n similarities
  /// in row blocks of `block_rows`, keeping memory at O(block_rows * n).
  Index block_rows = 2048;
  Index dense_limit = 8192;

  void validate() const;
};

/// Gaussian prior N(0, sigma2) on every weight plus optional Gaussian
/// hyperpriors mean ~ N(0, sigma0^2) and spread ~ N(mu_p, sigma_p2).
struct PriorConfig {
  double sigma2 = 1.0;
  std::optional<double> sigma0;
  std::optional<double> mu_p;
  std::optional<double> sigma_p2;
  /// Weight of the KL term; 1/n when unset.
  std::optional<double> kl_scale;
  /// Weight of the hyperprior term; equals the KL weight when unset.
  std::optional<double> hp_scale;

  void validate() const;
  bool has_hyperprior() const { return sigma0.has_value() || sigma_p2.has_value(); }
  double kl_weight(Index num_nodes) const;
  double hp_weight(Index num_nodes) const;
};

struct LossBreakdown {
  double infonce = 0.0;
  VectorXd per_node;
  double kl = 0.0;
  double hyperprior = 0.0;
  double total = 0.0;
};

enum class TrainingMode { infonce, vi_infonce, vgcl };

std::string to_string(TrainingMode mode);
TrainingMode training_mode_from_string(const std::string& text);

struct ObjectiveConfig {
  TrainingMode mode = TrainingMode::infonce;
  ContrastiveConfig contrastive;
  PriorConfig prior;
  /// Monte Carlo weight samples per loss evaluation (1 for deterministic models).
  int samples = 1;
};

struct ContrastiveLoss {
  Var loss;
  VectorXd per_node;
};

/// Symmetrized NT-Xent over cosine similarities of the rows of h1 and h2.
/// Node i of h1 and node i of h2 form the positive pair.
ContrastiveLoss nt_xent(Var h1, Var h2, const ContrastiveConfig& config);
LossBreakdown nt_xent(const Matrix& h1, const Matrix& h2, const ContrastiveConfig& config);

/// KL(q || p) between N(mean, softplus(spread)^2) and N(0, sigma2), summed over entries.
Var kl_gaussian(Var mean, Var spread, double sigma2);
double kl_gaussian(const ModelParams& params, double sigma2);

/// Negative log hyperprior density without constants; 0 when no hyperprior is set.
Var hyperprior_penalty(Var mean, Var spread, const PriorConfig& prior);
double hyperprior_penalty(const ModelParams& params, const PriorConfig& prior);

/// Contrastive loss of one view pair under fixed weights.
LossBreakdown contrastive_loss(const ViewPair& views, const WeightSet& weights, const ContrastiveConfig& config);

/// Training objective: NT-Xent averaged over `samples` weight draws from `weight_rng`,
/// plus the weighted KL and hyperprior terms of the variational modes.
/// When `gradients` is non-null it receives d(total)/d(parameters) in ModelParams::flatten() order.
LossBreakdown total_loss(const ViewPair& views, const ModelParams& params, const ObjectiveConfig& config,
                         Rng& weight_rng, std::vector<Matrix>* gradients = nullptr);

}  // namespace vgcl
