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

#include <doctest.h>

#include "synthetic.hpp"
#include "vgcl/augment.hpp"

using namespace vgcl;
using namespace vgcl::testing;

namespace {

Graph test_graph() {
  SyntheticSpec spec;
  spec.nodes = 300;
  spec.features = 50;
  spec.mean_degree = 6.0;
  return synthetic_graph(spec);
}

}  // namespace

TEST_CASE("edge dropping extremes") {
  const Graph g = test_graph();
  Rng rng(1, "augment");
  CHECK(drop_edges(g, 0.0, rng).size() == static_cast<std::size_t>(g.num_edges()));
  CHECK(drop_edges(g, 1.0, rng).empty());
  CHECK_THROWS_AS(drop_edges(g, 1.5, rng), Error);
}

TEST_CASE("edge dropping rate matches p_e") {
  const Graph g = test_graph();
  Rng rng(2, "augment");
  double kept = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) kept += static_cast<double>(drop_edges(g, 0.4, rng).size());
  const double rate = kept / (trials * static_cast<double>(g.num_edges()));
  CHECK(rate == doctest::Approx(0.6).epsilon(0.01));
}

TEST_CASE("column masking zeroes whole feature columns") {
  const Graph g = test_graph();
  Rng rng(3, "augment");
  const SparseMatrix masked = mask_features(g.features, 0.5, rng, FeatureMasking::column);
  const Matrix before = Matrix(g.features);
  const Matrix after = Matrix(masked);
  Index dropped = 0;
  for (Index c = 0; c < before.cols(); ++c) {
    const bool kept = after.col(c) == before.col(c);
    const bool zero = after.col(c).isZero();
    CHECK((kept || zero));
    if (zero && !before.col(c).isZero()) ++dropped;
  }
  CHECK(dropped > 0);
  CHECK(dropped < before.cols());
}

TEST_CASE("masking rates match p_f") {
  const Graph g = test_graph();
  Rng rng(4, "augment");
  double kept_entries = 0.0;
  double kept_columns = 0.0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    kept_entries += static_cast<double>(mask_features(g.features, 0.3, rng, FeatureMasking::entry).nonZeros());
    const Matrix m = Matrix(mask_features(g.features, 0.3, rng, FeatureMasking::column));
    for (Index c = 0; c < m.cols(); ++c) kept_columns += m.col(c).isZero() ? 0.0 : 1.0;
  }
  CHECK(kept_entries / (trials * static_cast<double>(g.features.nonZeros())) == doctest::Approx(0.7).epsilon(0.01));
  CHECK(kept_columns / (trials * 50.0) == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("views with zero probabilities equal the graph") {
  const Graph g = test_graph();
  Rng rng(5, "augment");
  AugmentConfig cfg;
  const ViewPair views = make_views(g, cfg, rng);
  const GraphView whole = identity_view(g);
  CHECK(Matrix(views.first.adjacency.matrix) == Matrix(whole.adjacency.matrix));
  CHECK(Matrix(views.second.features) == Matrix(g.features));
  CHECK(views.first.kept_edges == g.num_edges());
}

TEST_CASE("a view is renormalized over its surviving edges") {
  const Graph g = test_graph();
  Rng a(6, "augment");
  Rng b(6, "augment");
  const GraphView view = make_view(g, 0.2, 0.5, FeatureMasking::column, a);
  const auto kept = drop_edges(g, 0.5, b);
  const auto oracle = normalize_adjacency(symmetric_adjacency<double>(g.num_nodes(), kept));
  CHECK(Matrix(view.adjacency.matrix) == Matrix(oracle.matrix));
  CHECK(view.kept_edges == static_cast<Index>(kept.size()));
  CHECK(view.draw_id == 0);
}

TEST_CASE("views are reproducible and fresh on every call") {
  const Graph g = test_graph();
  AugmentConfig cfg{0.3, 0.4, 0.4, 0.2, FeatureMasking::column};
  Rng a(7, "augment");
  Rng b(7, "augment");
  const ViewPair first = make_views(g, cfg, a);
  const ViewPair again = make_views(g, cfg, b);
  CHECK(Matrix(first.first.adjacency.matrix) == Matrix(again.first.adjacency.matrix));
  CHECK(Matrix(first.second.features) == Matrix(again.second.features));
  const ViewPair next = make_views(g, cfg, a);
  CHECK(Matrix(next.first.adjacency.matrix) != Matrix(first.first.adjacency.matrix));
  CHECK(next.first.draw_id > first.second.draw_id);
}

TEST_CASE("invalid probabilities are rejected") {
  AugmentConfig cfg;
  cfg.p_f2 = -0.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
