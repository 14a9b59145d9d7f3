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

#include <algorithm>
#include <cmath>
#include <set>

#include "synthetic.hpp"
#include "vgcl/graphio.hpp"
#include "vgcl/text_io.hpp"

using namespace vgcl;
using namespace vgcl::testing;

namespace {

Graph path3() {
  Graph g;
  g.name = "path";
  g.num_classes = 2;
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  g.adjacency = symmetric_adjacency<double>(3, edges);
  g.features = SparseMatrix(3, 2);
  g.features.insert(0, 0) = 1.0;
  g.features.insert(2, 1) = 0.5;
  g.features.makeCompressed();
  g.labels = Eigen::VectorXi(3);
  g.labels << 0, 1, 0;
  return g;
}

void write(const std::filesystem::path& p, const std::string& s) { text::write_file(p, s); }

std::filesystem::path valid_dir() {
  const auto dir = temp_dir("graphio");
  write(dir / "meta.json", R"({"n": 3, "f": 2, "num_classes": 2, "name": "tiny"})");
  write(dir / "edges.tsv", "0\t1\n1\t2\n");
  write(dir / "features.csr", "3 2 2\n0 1 1 2\n0 1\n1 0.5\n");
  write(dir / "labels.txt", "0\n1\n0\n");
  return dir;
}

std::string error_of(const std::filesystem::path& dir) {
  try {
    load_dataset(dir);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("path graph normalization matches hand values") {
  const auto norm = normalize_adjacency(path3());
  const Matrix a = Matrix(norm.matrix);
  CHECK(a(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(a(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(a(1, 2) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(a(0, 2) == 0.0);
}

TEST_CASE("normalization matches a dense oracle") {
  SyntheticSpec spec;
  spec.nodes = 60;
  spec.seed = 3;
  const Graph g = synthetic_graph(spec);
  const Matrix a = Matrix(g.adjacency) + Matrix::Identity(60, 60);
  const VectorXd d = a.rowwise().sum();
  const VectorXd s = d.array().rsqrt();
  const Matrix oracle = s.asDiagonal() * a * s.asDiagonal();
  const Matrix got = Matrix(normalize_adjacency(g).matrix);
  CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((got - got.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("isolated node keeps only its self loop") {
  Graph g = path3();
  const std::vector<Edge> edges{{0, 1}};
  g.adjacency = symmetric_adjacency<double>(3, edges);
  const Matrix a = Matrix(normalize_adjacency(g).matrix);
  CHECK(a(2, 2) == 1.0);
  CHECK(a.row(2).sum() == 1.0);
}

TEST_CASE("symmetric adjacency drops self loops and duplicates") {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}, {2, 2}, {1, 2}};
  const auto adj = symmetric_adjacency<double>(3, edges);
  CHECK(adj.nonZeros() == 4);
  CHECK(Matrix(adj).maxCoeff() == 1.0);
  CHECK(Matrix(adj).diagonal().isZero());
  const auto und = undirected_edges(adj);
  CHECK(und == std::vector<Edge>{{0, 1}, {1, 2}});
  const std::vector<Edge> bad{{0, 3}};
  CHECK_THROWS_AS(symmetric_adjacency<double>(3, bad), Error);
}

TEST_CASE("split sizes and disjointness") {
  const SplitSpec small = make_split(10, 0);
  CHECK(small.train.size() == 1);
  CHECK(small.val.size() == 1);
  CHECK(small.test.size() == 8);
  const SplitSpec cora = make_split(2708, 5);
  CHECK(cora.train.size() == 271);
  CHECK(cora.val.size() == 271);
  CHECK(cora.test.size() == 2166);
  std::set<Index> all(cora.train.begin(), cora.train.end());
  all.insert(cora.val.begin(), cora.val.end());
  all.insert(cora.test.begin(), cora.test.end());
  CHECK(all.size() == 2708);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == 2707);
  CHECK_THROWS_AS(make_split(9, 0), Error);
}

TEST_CASE("splits are reproducible per seed and differ across seeds") {
  const SplitSpec a = make_split(500, 3);
  const SplitSpec b = make_split(500, 3);
  const SplitSpec c = make_split(500, 4);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(a.train != c.train);
}

TEST_CASE("load a valid dataset") {
  const Graph g = load_dataset(valid_dir());
  CHECK(g.name == "tiny");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_features() == 2);
  CHECK(g.num_edges() == 2);
  CHECK(g.features.coeff(2, 1) == 0.5);
  CHECK(g.labels[1] == 1);
}

TEST_CASE("save then load round trips exactly") {
  SyntheticSpec spec;
  spec.nodes = 80;
  Graph g = synthetic_graph(spec);
  g.features.coeffRef(0, 0) = 0.1 + 1e-17;  // non-representable decimal
  const auto dir = temp_dir("roundtrip");
  save_dataset(g, dir);
  const Graph back = load_dataset(dir);
  CHECK(back.name == g.name);
  CHECK(Matrix(back.adjacency) == Matrix(g.adjacency));
  CHECK(Matrix(back.features) == Matrix(g.features));
  CHECK(back.labels == g.labels);
  const auto dir2 = temp_dir("roundtrip2");
  save_dataset(back, dir2);
  CHECK(text::read_file(dir / "features.csr") == text::read_file(dir2 / "features.csr"));
  CHECK(text::read_file(dir / "edges.tsv") == text::read_file(dir2 / "edges.tsv"));
}

TEST_CASE("self loops in the edge file are ignored") {
  const auto dir = valid_dir();
  write(dir / "edges.tsv", "0\t1\n1\t1\n1\t2\n2\t1\n");
  const Graph g = load_dataset(dir);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("malformed datasets name the file and line") {
  {
    const auto dir = valid_dir();
    write(dir / "edges.tsv", "0\t1\n1\t7\n");
    const auto msg = error_of(dir);
    CHECK(msg.find("edges.tsv:2") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "edges.tsv", "0\t1\nx\t2\n");
    CHECK(error_of(dir).find("edges.tsv:2") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "labels.txt", "0\n5\n0\n");
    CHECK(error_of(dir).find("labels.txt:2") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "labels.txt", "0\n1\n");
    CHECK(error_of(dir).find("expected 3 labels") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "features.csr", "3 2 2\n0 1 1 2\n0 2\n1 0.5\n");
    CHECK(error_of(dir).find("features.csr") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "features.csr", "3 2 2\n0 2 1 2\n0 1\n1 0.5\n");
    CHECK(error_of(dir).find("features.csr") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "features.csr", "3 2 2\n0 1 1 2\n0 1\n1 -0.5\n");
    CHECK(error_of(dir).find("features.csr") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    write(dir / "meta.json", R"({"n": 3, "f": 2})");
    CHECK(error_of(dir).find("num_classes") != std::string::npos);
  }
  {
    const auto dir = valid_dir();
    std::filesystem::remove(dir / "labels.txt");
    CHECK(error_of(dir).find("labels.txt") != std::string::npos);
  }
}
