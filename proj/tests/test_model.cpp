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

#include <cmath>

#include "gradcheck.hpp"
#include "vgcl/augment.hpp"
#include "vgcl/model.hpp"

using namespace vgcl;
using namespace vgcl::testing;

namespace {

EncoderConfig small_config(Index in_dim) {
  EncoderConfig c;
  c.in_dim = in_dim;
  c.hidden = 6;
  c.out = 5;
  c.proj_hidden = 4;
  return c;
}

Graph small_graph(Index nodes = 12) {
  SyntheticSpec spec;
  spec.nodes = nodes;
  spec.classes = 3;
  spec.features = 7;
  spec.words_per_node = 3;
  return synthetic_graph(spec);
}

}  // namespace

TEST_CASE("init shapes, Glorot bounds and zero biases") {
  Rng rng(1, "init");
  EncoderConfig c;
  c.in_dim = 300;
  const ModelParams p = init_params(c, rng, ModelKind::variational, 0.01);
  const auto shapes = c.shapes();
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    CHECK(p.mean[k].rows() == shapes[k].first);
    CHECK(p.mean[k].cols() == shapes[k].second);
    CHECK(p.sigma()[k].isConstant(0.01, 1e-12));
  }
  const double bound = std::sqrt(6.0 / (300.0 + 128.0));
  CHECK(at(p.mean, TensorId::W1).cwiseAbs().maxCoeff() <= bound);
  CHECK(at(p.mean, TensorId::W1).cwiseAbs().maxCoeff() > 0.9 * bound);
  // Uniform(-b, b) has variance b^2 / 3.
  CHECK(at(p.mean, TensorId::W1).squaredNorm() / (300.0 * 128.0) ==
        doctest::Approx(bound * bound / 3.0).epsilon(0.03));
  CHECK(at(p.mean, TensorId::b1).isZero());
  CHECK(at(p.mean, TensorId::b2).isZero());
}

TEST_CASE("deterministic models have no spreads and sample their means") {
  Rng rng(1, "init");
  const ModelParams p = init_params(small_config(7), rng, ModelKind::deterministic);
  CHECK(p.flatten().size() == kTensorCount);
  Rng weights(2, "weights");
  const WeightSample s = sample_weights(p, weights);
  CHECK(weights.draws() == 0);
  for (std::size_t k = 0; k < kTensorCount; ++k) CHECK(s.weights[k] == p.mean[k]);
}

TEST_CASE("weight samples have the configured mean and spread") {
  Rng rng(3, "init");
  EncoderConfig c = small_config(40);
  c.hidden = 50;
  ModelParams p = init_params(c, rng, ModelKind::variational, 0.2);
  Rng weights(4, "weights");
  const int draws = 400;
  Matrix sum = Matrix::Zero(40, 50);
  Matrix sq = Matrix::Zero(40, 50);
  for (int d = 0; d < draws; ++d) {
    const WeightSample s = sample_weights(p, weights);
    const Matrix dev = at(s.weights, TensorId::W1) - at(p.mean, TensorId::W1);
    CHECK((dev - 0.2 * at(s.noise, TensorId::W1)).cwiseAbs().maxCoeff() < 1e-12);
    sum += dev;
    sq += dev.cwiseAbs2();
  }
  CHECK(std::abs(sum.mean() / draws) < 0.005);
  CHECK(std::sqrt(sq.mean() / draws) == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("flatten and unflatten round trip") {
  Rng rng(5, "init");
  ModelParams p = init_params(small_config(7), rng, ModelKind::variational);
  auto flat = p.flatten();
  CHECK(flat.size() == 2 * kTensorCount);
  flat[kTensorCount].setConstant(-1.0);
  p.unflatten(flat);
  CHECK(p.spread[0].isConstant(-1.0));
  flat.pop_back();
  CHECK_THROWS_AS(p.unflatten(flat), Error);
}

TEST_CASE("encode matches a dense oracle") {
  const Graph g = small_graph();
  Rng rng(6, "init");
  const ModelParams p = init_params(small_config(7), rng, ModelKind::deterministic);
  const GraphView view = identity_view(g);
  const Matrix a = Matrix(view.adjacency.matrix);
  const Matrix x = Matrix(g.features);
  const Matrix h = (a * x * at(p.mean, TensorId::W1)).cwiseMax(0.0);
  const Matrix oracle = a * h * at(p.mean, TensorId::W2);
  const Matrix z = encode(view.adjacency, view.features, p.mean);
  CHECK((z - oracle).cwiseAbs().maxCoeff() < 1e-12);

  Tape tape;
  const TapeWeights tw = weights_on_tape(tape, p, nullptr);
  const Var zt = encode(view.adjacency, view.features, tw.weights);
  CHECK((zt.value() - z).cwiseAbs().maxCoeff() < 1e-14);
  const Var ht = project(zt, tw.weights);
  CHECK((ht.value() - project(z, p.mean)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("projection head applies ELU between its layers") {
  WeightSet w;
  at(w, TensorId::P1) = Matrix::Identity(2, 2);
  at(w, TensorId::b1) = Matrix::Zero(1, 2);
  at(w, TensorId::P2) = Matrix::Identity(2, 2);
  at(w, TensorId::b2) = Matrix::Constant(1, 2, 0.5);
  Matrix z(1, 2);
  z << 2.0, -1.0;
  const Matrix h = project(z, w);
  CHECK(h(0, 0) == doctest::Approx(2.5));
  CHECK(h(0, 1) == doctest::Approx(std::expm1(-1.0) + 0.5));
}

TEST_CASE("encoder and head gradients agree with finite differences") {
  const Graph g = small_graph(10);
  const GraphView view = identity_view(g);
  Rng rng(7, "test");
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix w1 = random_normal(7, 6, rng);
    const Matrix w2 = random_normal(6, 5, rng);
    const double err = gradcheck(
        [&](GradTape& tape, const auto& x) {
          std::array<Var, kTensorCount> w;
          w[0] = x[0];
          w[1] = x[1];
          for (std::size_t k = 2; k < kTensorCount; ++k) w[k] = tape.constant(Matrix::Zero(1, 1));
          return encode(view.adjacency, view.features, w);
        },
        {w1, w2}, rng);
    CHECK(err < 1e-6);
  }
}

TEST_CASE("reparameterized weights on the tape") {
  Rng rng(8, "init");
  const ModelParams p = init_params(small_config(7), rng, ModelKind::variational, 0.3);
  Rng weights(9, "weights");
  const WeightSample s = sample_weights(p, weights);
  Tape tape;
  const TapeWeights tw = weights_on_tape(tape, p, &s.noise);
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    CHECK((tw.weights[k].value() - s.weights[k]).cwiseAbs().maxCoeff() < 1e-15);
  }
}
