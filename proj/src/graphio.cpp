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

#include "vgcl/graphio.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "vgcl/random.hpp"
#include "vgcl/text_io.hpp"

namespace vgcl {

SplitSpec make_split(Index n, std::uint64_t seed) {
  if (n < 10) throw Error("make_split requires at least 10 nodes, got " + std::to_string(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed, "split");
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  const auto tenth = static_cast<std::size_t>((n + 5) / 10);
  SplitSpec split;
  split.seed = seed;
  split.train.assign(order.begin(), order.begin() + tenth);
  split.val.assign(order.begin() + tenth, order.begin() + 2 * tenth);
  split.test.assign(order.begin() + 2 * tenth, order.end());
  return split;
}

namespace {

using text::LineReader;

Index read_meta_int(const nlohmann::json& meta, const char* key, const std::filesystem::path& path) {
  if (!meta.contains(key) || !meta[key].is_number_integer()) {
    throw Error(path.string() + ": missing integer field \"" + key + "\"");
  }
  return meta[key].get<Index>();
}

}  // namespace

Graph load_dataset(const std::filesystem::path& dir) {
  const auto meta_path = dir / "meta.json";
  std::ifstream meta_file(meta_path);
  if (!meta_file) throw Error("missing dataset file " + meta_path.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_file);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(meta_path.string() + ": " + e.what());
  }
  const Index n = read_meta_int(meta, "n", meta_path);
  const Index f = read_meta_int(meta, "f", meta_path);
  const Index num_classes = read_meta_int(meta, "num_classes", meta_path);
  if (n < 1 || f < 1 || num_classes < 1) throw Error(meta_path.string() + ": n, f, num_classes must be positive");

  Graph graph;
  const auto base = dir.filename().empty() ? dir.parent_path().filename() : dir.filename();
  graph.name = meta.value("name", base.string());
  graph.num_classes = num_classes;

  // Edges.
  {
    LineReader reader(dir / "edges.tsv");
    std::vector<Edge> edges;
    std::string_view line;
    while (reader.next(line)) {
      if (text::is_blank(line)) continue;
      const auto fields = text::split(line);
      if (fields.size() != 2) reader.fail("expected `src<TAB>dst`");
      const Index u = reader.parse<Index>(fields[0]);
      const Index v = reader.parse<Index>(fields[1]);
      if (u < 0 || u >= n || v < 0 || v >= n) reader.fail("node index out of range [0, " + std::to_string(n) + ")");
      edges.emplace_back(u, v);
    }
    graph.adjacency = symmetric_adjacency<double>(n, edges);
  }

  // Features.
  {
    LineReader reader(dir / "features.csr");
    std::string_view line;
    if (!reader.next(line)) reader.fail("missing header line");
    const auto header = text::split(line);
    if (header.size() != 3) reader.fail("expected `n f nnz`");
    const Index rows = reader.parse<Index>(header[0]);
    const Index cols = reader.parse<Index>(header[1]);
    const Index nnz = reader.parse<Index>(header[2]);
    if (rows != n || cols != f) reader.fail("shape disagrees with meta.json");
    if (nnz < 0) reader.fail("negative nnz");

    if (!reader.next(line)) reader.fail("missing row pointers");
    const auto ptr_fields = text::split(line);
    if (static_cast<Index>(ptr_fields.size()) != n + 1) reader.fail("expected n+1 row pointers");
    std::vector<std::int64_t> row_ptr;
    row_ptr.reserve(ptr_fields.size());
    for (const auto field : ptr_fields) row_ptr.push_back(reader.parse<std::int64_t>(field));
    if (row_ptr.front() != 0 || row_ptr.back() != nnz) reader.fail("row pointers must start at 0 and end at nnz");
    for (std::size_t i = 1; i < row_ptr.size(); ++i) {
      if (row_ptr[i] < row_ptr[i - 1]) reader.fail("row pointers must be nondecreasing");
    }

    if (!reader.next(line) && nnz > 0) reader.fail("missing column indices");
    const auto col_fields = text::split(line);
    if (static_cast<Index>(col_fields.size()) != nnz) reader.fail("expected nnz column indices");
    std::vector<std::int64_t> col_idx;
    col_idx.reserve(col_fields.size());
    for (const auto field : col_fields) {
      const auto col = reader.parse<std::int64_t>(field);
      if (col < 0 || col >= f) reader.fail("column index out of range [0, " + std::to_string(f) + ")");
      col_idx.push_back(col);
    }

    if (!reader.next(line) && nnz > 0) reader.fail("missing values");
    const auto value_fields = text::split(line);
    if (static_cast<Index>(value_fields.size()) != nnz) reader.fail("expected nnz values");
    std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
    triplets.reserve(static_cast<std::size_t>(nnz));
    for (Index row = 0; row < n; ++row) {
      for (auto k = row_ptr[row]; k < row_ptr[row + 1]; ++k) {
        const double value = reader.parse<double>(value_fields[k]);
        if (!(value >= 0) || !std::isfinite(value)) reader.fail("feature values must be finite and nonnegative");
        triplets.emplace_back(row, col_idx[k], value);
      }
    }
    graph.features.resize(n, f);
    graph.features.setFromTriplets(triplets.begin(), triplets.end());
    graph.features.makeCompressed();
  }

  // Labels.
  {
    LineReader reader(dir / "labels.txt");
    graph.labels.resize(n);
    Index count = 0;
    std::string_view line;
    while (reader.next(line)) {
      if (text::is_blank(line)) continue;
      const auto fields = text::split(line);
      if (fields.size() != 1) reader.fail("expected one integer label");
      if (count >= n) reader.fail("more labels than nodes");
      const int label = reader.parse<int>(fields[0]);
      if (label < 0 || label >= num_classes) reader.fail("label outside [0, " + std::to_string(num_classes) + ")");
      graph.labels[count++] = label;
    }
    if (count != n) throw Error((dir / "labels.txt").string() + ": expected " + std::to_string(n) + " labels, found " + std::to_string(count));
  }

  graph.validate();
  return graph;
}

void save_dataset(const Graph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Index n = graph.num_nodes();
  {
    nlohmann::json meta = {{"n", n}, {"f", graph.num_features()}, {"num_classes", graph.num_classes}, {"name", graph.name}};
    text::write_file(dir / "meta.json", meta.dump() + "\n");
  }
  {
    std::string out;
    for (const auto& [u, v] : undirected_edges(graph.adjacency)) {
      out += std::to_string(u);
      out += '\t';
      out += std::to_string(v);
      out += '\n';
    }
    text::write_file(dir / "edges.tsv", out);
  }
  {
    SparseMatrix features = graph.features;
    features.makeCompressed();
    const Index nnz = features.nonZeros();
    std::string out = std::to_string(n) + ' ' + std::to_string(features.cols()) + ' ' + std::to_string(nnz) + '\n';
    for (Index i = 0; i <= n; ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(features.outerIndexPtr()[i]);
    }
    out += '\n';
    for (Index k = 0; k < nnz; ++k) {
      if (k > 0) out += ' ';
      out += std::to_string(features.innerIndexPtr()[k]);
    }
    out += '\n';
    for (Index k = 0; k < nnz; ++k) {
      if (k > 0) out += ' ';
      out += text::format_double(features.valuePtr()[k]);
    }
    out += '\n';
    text::write_file(dir / "features.csr", out);
  }
  {
    std::string out;
    for (Index i = 0; i < n; ++i) {
      out += std::to_string(graph.labels[i]);
      out += '\n';
    }
    text::write_file(dir / "labels.txt", out);
  }
}

}  // namespace vgcl
