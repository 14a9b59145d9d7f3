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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vgcl/error.hpp"
#include "vgcl/types.hpp"

namespace vgcl {

/// One transductive graph: symmetric unweighted adjacency without stored
/// self-loops, sparse nonnegative node features and one label per node.
template <typename Scalar>
struct SparseGraph {
  std::string name;
  Index num_classes = 0;
  Sparse<Scalar> adjacency;  // n x n, unit values
  Sparse<Scalar> features;   // n x f
  Eigen::VectorXi labels;    // n

  Index num_nodes() const { return adjacency.rows(); }
  Index num_features() const { return features.cols(); }
  /// Undirected edge count.
  Index num_edges() const { return adjacency.nonZeros() / 2; }

  /// Throws Error when an invariant is broken.
  void validate() const;
};

using Graph = SparseGraph<double>;

/// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
template <typename Scalar>
struct NormalizedAdjacency {
  Sparse<Scalar> matrix;

  Index size() const { return matrix.rows(); }
};

/// Disjoint train / validation / test node sets of a 10/10/80 split.
struct SplitSpec {
  std::uint64_t seed = 0;
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
};

using Edge = std::pair<Index, Index>;

/// Builds the symmetric, deduplicated adjacency of an undirected edge list.
/// Self-loops are dropped.
template <typename Scalar>
Sparse<Scalar> symmetric_adjacency(Index n, std::span<const Edge> edges) {
  std::vector<Eigen::Triplet<Scalar, std::int64_t>> triplets;
  triplets.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) continue;
    triplets.emplace_back(u, v, Scalar(1));
    triplets.emplace_back(v, u, Scalar(1));
  }
  Sparse<Scalar> adjacency(n, n);
  // Duplicates collapse to a single unit entry.
  adjacency.setFromTriplets(triplets.begin(), triplets.end(),
                            [](const Scalar&, const Scalar&) { return Scalar(1); });
  adjacency.makeCompressed();
  return adjacency;
}

/// Undirected edges (u < v) of a symmetric adjacency, in CSR order.
template <typename Scalar>
std::vector<Edge> undirected_edges(const Sparse<Scalar>& adjacency) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(adjacency.nonZeros() / 2));
  for (Index row = 0; row < adjacency.outerSize(); ++row) {
    for (typename Sparse<Scalar>::InnerIterator it(adjacency, row); it; ++it) {
      if (it.col() > row) edges.emplace_back(row, it.col());
    }
  }
  return edges;
}

template <typename Scalar>
NormalizedAdjacency<Scalar> normalize_adjacency(const Sparse<Scalar>& adjacency) {
  const Index n = adjacency.rows();
  Sparse<Scalar> identity(n, n);
  identity.setIdentity();
  Sparse<Scalar> with_loops = adjacency + identity;
  with_loops.makeCompressed();

  Vector<Scalar> inv_sqrt_degree(n);
  for (Index row = 0; row < n; ++row) {
    Scalar degree = 0;
    for (typename Sparse<Scalar>::InnerIterator it(with_loops, row); it; ++it) degree += it.value();
    inv_sqrt_degree[row] = Scalar(1) / std::sqrt(degree);
  }
  for (Index row = 0; row < n; ++row) {
    for (typename Sparse<Scalar>::InnerIterator it(with_loops, row); it; ++it) {
      it.valueRef() *= inv_sqrt_degree[row] * inv_sqrt_degree[it.col()];
    }
  }
  return {std::move(with_loops)};
}

template <typename Scalar>
NormalizedAdjacency<Scalar> normalize_adjacency(const SparseGraph<Scalar>& graph) {
  return normalize_adjacency(graph.adjacency);
}

template <typename Scalar>
void SparseGraph<Scalar>::validate() const {
  const Index n = adjacency.rows();
  if (adjacency.cols() != n) throw Error("adjacency is not square");
  if (features.rows() != n) throw Error("feature row count differs from node count");
  if (labels.size() != n) throw Error("label count differs from node count");
  if (num_classes < 1) throw Error("num_classes must be positive");
  for (Index i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error("label of node " + std::to_string(i) + " outside [0, num_classes)");
    }
  }
  const Sparse<Scalar> transposed = adjacency.transpose();
  for (Index row = 0; row < n; ++row) {
    for (typename Sparse<Scalar>::InnerIterator it(adjacency, row); it; ++it) {
      if (it.col() == row) throw Error("adjacency stores a self-loop");
      if (transposed.coeff(row, it.col()) != it.value()) throw Error("adjacency is not symmetric");
    }
  }
  for (Index k = 0; k < features.nonZeros(); ++k) {
    const Scalar value = features.valuePtr()[k];
    if (!(value >= 0) || !std::isfinite(static_cast<double>(value))) {
      throw Error("features must be finite and nonnegative");
    }
  }
}

/// Seeded uniform permutation of [0, n): first 10% train, next 10% validation,
/// the remainder test. Sizes round half up. Requires n >= 10.
SplitSpec make_split(Index n, std::uint64_t seed);

/// Reads meta.json, edges.tsv, features.csr and labels.txt from `dir`.
Graph load_dataset(const std::filesystem::path& dir);

/// Writes the four dataset files; each undirected edge is listed once.
void save_dataset(const Graph& graph, const std::filesystem::path& dir);

}  // namespace vgcl
