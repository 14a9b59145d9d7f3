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

#include "vgcl/augment.hpp"

#include <string>

namespace vgcl {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string("augment.") + name + " must lie in [0, 1]");
}

}  // namespace

void AugmentConfig::validate() const {
  check_probability(p_f1, "p_f1");
  check_probability(p_f2, "p_f2");
  check_probability(p_e1, "p_e1");
  check_probability(p_e2, "p_e2");
}

std::vector<Edge> drop_edges(const Graph& graph, double p_e, Rng& rng) {
  check_probability(p_e, "p_e");
  std::vector<Edge> kept;
  for (const auto& edge : undirected_edges(graph.adjacency)) {
    if (!rng.bernoulli(p_e)) kept.push_back(edge);
  }
  return kept;
}

SparseMatrix mask_features(const SparseMatrix& features, double p_f, Rng& rng, FeatureMasking masking) {
  check_probability(p_f, "p_f");
  SparseMatrix masked = features;
  if (masking == FeatureMasking::column) {
    std::vector<char> dropped(static_cast<std::size_t>(features.cols()));
    for (auto& d : dropped) d = rng.bernoulli(p_f) ? 1 : 0;
    masked.prune([&](Index, Index col, const double&) { return dropped[static_cast<std::size_t>(col)] == 0; });
  } else {
    std::vector<char> dropped(static_cast<std::size_t>(features.nonZeros()));
    for (auto& d : dropped) d = rng.bernoulli(p_f) ? 1 : 0;
    // Values are visited in storage order, matching the draw order above.
    std::size_t k = 0;
    masked.prune([&](Index, Index, const double&) { return dropped[k++] == 0; });
  }
  masked.makeCompressed();
  return masked;
}

GraphView make_view(const Graph& graph, double p_f, double p_e, FeatureMasking masking, Rng& rng) {
  GraphView view;
  view.draw_id = rng.draws();
  const auto kept = drop_edges(graph, p_e, rng);
  view.kept_edges = static_cast<Index>(kept.size());
  view.adjacency = normalize_adjacency(symmetric_adjacency<double>(graph.num_nodes(), kept));
  view.features = mask_features(graph.features, p_f, rng, masking);
  return view;
}

ViewPair make_views(const Graph& graph, const AugmentConfig& config, Rng& rng) {
  config.validate();
  ViewPair views;
  views.first = make_view(graph, config.p_f1, config.p_e1, config.masking, rng);
  views.second = make_view(graph, config.p_f2, config.p_e2, config.masking, rng);
  return views;
}

GraphView identity_view(const Graph& graph) {
  GraphView view;
  view.adjacency = normalize_adjacency(graph);
  view.features = graph.features;
  view.kept_edges = graph.num_edges();
  return view;
}

}  // namespace vgcl
