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

#include "synthetic.hpp"

#include <unistd.h>

#include <algorithm>
#include <set>

namespace vgcl::testing {

Graph synthetic_graph(const SyntheticSpec& spec) {
  Rng rng(spec.seed, "synthetic");
  Graph graph;
  graph.name = spec.name;
  graph.num_classes = spec.classes;
  graph.labels.resize(spec.nodes);
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(spec.classes));
  for (Index i = 0; i < spec.nodes; ++i) {
    graph.labels[i] = static_cast<int>(i % spec.classes);
    members[static_cast<std::size_t>(graph.labels[i])].push_back(i);
  }

  std::set<Edge> edges;
  const auto target = static_cast<std::size_t>(spec.mean_degree * static_cast<double>(spec.nodes) / 2.0);
  while (edges.size() < target) {
    const Index u = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.nodes)));
    Index v = 0;
    if (rng.bernoulli(spec.homophily)) {
      const auto& same = members[static_cast<std::size_t>(graph.labels[u])];
      v = same[rng.below(same.size())];
    } else {
      v = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.nodes)));
    }
    if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
  }
  const std::vector<Edge> edge_list(edges.begin(), edges.end());
  graph.adjacency = symmetric_adjacency<double>(spec.nodes, edge_list);

  const Index topic_size = std::max<Index>(1, spec.features / spec.classes);
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  for (Index i = 0; i < spec.nodes; ++i) {
    std::set<Index> words;
    for (Index w = 0; w < spec.words_per_node; ++w) {
      if (rng.bernoulli(spec.topic_strength)) {
        const Index base = (graph.labels[i] * topic_size) % spec.features;
        words.insert((base + static_cast<Index>(rng.below(static_cast<std::uint64_t>(topic_size)))) % spec.features);
      } else {
        words.insert(static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.features))));
      }
    }
    for (const Index w : words) triplets.emplace_back(i, w, 1.0);
  }
  graph.features.resize(spec.nodes, spec.features);
  graph.features.setFromTriplets(triplets.begin(), triplets.end());
  graph.validate();
  return graph;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("vgcl_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Matrix random_normal(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  rng.fill_normal(m);
  return m;
}

Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x, double step) {
  Matrix grad(x.rows(), x.cols());
  Matrix probe = x;
  for (Index k = 0; k < x.size(); ++k) {
    const double saved = probe.data()[k];
    probe.data()[k] = saved + step;
    const double up = f(probe);
    probe.data()[k] = saved - step;
    const double down = f(probe);
    probe.data()[k] = saved;
    grad.data()[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

double relative_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace vgcl::testing
