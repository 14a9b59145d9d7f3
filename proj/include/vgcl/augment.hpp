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
#include <vector>

#include "vgcl/graphio.hpp"
#include "vgcl/random.hpp"

namespace vgcl {

/// How feature masking draws its Bernoulli mask.
enum class FeatureMasking {
  column,  // one draw per feature dimension, shared by all nodes
  entry,   // one draw per stored feature entry
};

/// Drop probabilities of the two views: p_f* mask features, p_e* drop edges.
struct AugmentConfig {
  double p_f1 = 0.0;
  double p_f2 = 0.0;
  double p_e1 = 0.0;
  double p_e2 = 0.0;
  FeatureMasking masking = FeatureMasking::column;

  void validate() const;
};

/// One stochastic view of a graph. Node count and order match the source graph.
struct GraphView {
  NormalizedAdjacency<double> adjacency;
  SparseMatrix features;
  Index kept_edges = 0;
  /// Position in the augmentation stream where this view's draws began.
  std::uint64_t draw_id = 0;
};

/// Positives for contrastive training: node i of `first` pairs with node i of `second`.
struct ViewPair {
  GraphView first;
  GraphView second;
};

/// Removes each undirected edge independently with probability p_e and
/// returns the survivors (u < v).
std::vector<Edge> drop_edges(const Graph& graph, double p_e, Rng& rng);

/// Zeroes features with probability p_f, per column or per entry.
SparseMatrix mask_features(const SparseMatrix& features, double p_f, Rng& rng,
                           FeatureMasking masking = FeatureMasking::column);

/// Drops edges, renormalizes the surviving adjacency and masks features.
GraphView make_view(const Graph& graph, double p_f, double p_e, FeatureMasking masking, Rng& rng);

/// View 1 uses (p_f1, p_e1), view 2 uses (p_f2, p_e2); fresh draws from `rng` on every call.
ViewPair make_views(const Graph& graph, const AugmentConfig& config, Rng& rng);

/// The graph itself as a view (no drops).
GraphView identity_view(const Graph& graph);

}  // namespace vgcl
