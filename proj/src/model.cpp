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

#include "vgcl/model.hpp"

#include <cmath>
#include <string>

namespace vgcl {

void EncoderConfig::validate() const {
  if (in_dim < 1 || hidden < 1 || out < 1 || proj_hidden < 1) throw Error("encoder dimensions must be >= 1");
}

std::array<std::pair<Index, Index>, kTensorCount> EncoderConfig::shapes() const {
  return {{{in_dim, hidden}, {hidden, out}, {out, proj_hidden}, {1, proj_hidden}, {proj_hidden, out}, {1, out}}};
}

WeightSet ModelParams::sigma() const {
  WeightSet out;
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    out[k] = spread[k].unaryExpr([](double p) { return ndiff::softplus(p); });
  }
  return out;
}

std::vector<Matrix> ModelParams::flatten() const {
  std::vector<Matrix> flat(mean.begin(), mean.end());
  if (variational()) flat.insert(flat.end(), spread.begin(), spread.end());
  return flat;
}

void ModelParams::unflatten(const std::vector<Matrix>& flat) {
  const std::size_t expected = variational() ? 2 * kTensorCount : kTensorCount;
  if (flat.size() != expected) throw Error("parameter count mismatch");
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    mean[k] = flat[k];
    if (variational()) spread[k] = flat[kTensorCount + k];
  }
}

ModelParams init_params(const EncoderConfig& config, Rng& rng, ModelKind kind, double init_sigma) {
  config.validate();
  if (kind == ModelKind::variational && !(init_sigma > 0)) throw Error("init_sigma must be positive");
  ModelParams params;
  params.kind = kind;
  params.config = config;
  const auto shapes = config.shapes();
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    const auto [rows, cols] = shapes[k];
    const bool bias = k == static_cast<std::size_t>(TensorId::b1) || k == static_cast<std::size_t>(TensorId::b2);
    Matrix value = Matrix::Zero(rows, cols);
    if (!bias) {
      const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (Index i = 0; i < value.size(); ++i) value.data()[i] = (2.0 * rng.uniform() - 1.0) * bound;
    }
    params.mean[k] = std::move(value);
    if (kind == ModelKind::variational) {
      params.spread[k] = Matrix::Constant(rows, cols, ndiff::inverse_softplus(init_sigma));
    }
  }
  return params;
}

WeightSample sample_weights(const ModelParams& params, Rng& rng) {
  WeightSample sample;
  sample.draw_id = rng.draws();
  if (!params.variational()) {
    sample.weights = params.mean;
    return sample;
  }
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    Matrix noise(params.mean[k].rows(), params.mean[k].cols());
    rng.fill_normal(noise);
    const Matrix sigma = params.spread[k].unaryExpr([](double p) { return ndiff::softplus(p); });
    sample.weights[k] = params.mean[k] + sigma.cwiseProduct(noise);
    sample.noise[k] = std::move(noise);
  }
  return sample;
}

TapeWeights weights_on_tape(Tape& tape, const ModelParams& params, const WeightSet* noise) {
  TapeWeights out;
  for (std::size_t k = 0; k < kTensorCount; ++k) out.mean[k] = tape.parameter(params.mean[k]);
  if (params.variational()) {
    for (std::size_t k = 0; k < kTensorCount; ++k) out.spread[k] = tape.parameter(params.spread[k]);
  }
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    if (params.variational() && noise != nullptr) {
      const Var sigma = ndiff::softplus(out.spread[k]);
      out.weights[k] = ndiff::add(out.mean[k], ndiff::hadamard(sigma, tape.constant((*noise)[k])));
    } else {
      out.weights[k] = out.mean[k];
    }
  }
  return out;
}

Var encode(const NormalizedAdjacency<double>& adjacency, const SparseMatrix& features,
           const std::array<Var, kTensorCount>& w) {
  const Var& w1 = w[static_cast<std::size_t>(TensorId::W1)];
  const Var& w2 = w[static_cast<std::size_t>(TensorId::W2)];
  if (features.rows() != adjacency.size()) throw Error("encode: feature rows differ from node count");
  const Var hidden = ndiff::relu(ndiff::spmm(adjacency.matrix, ndiff::spmm(features, w1)));
  return ndiff::spmm(adjacency.matrix, ndiff::matmul(hidden, w2));
}

Matrix encode(const NormalizedAdjacency<double>& adjacency, const SparseMatrix& features, const WeightSet& w) {
  const Matrix& w1 = at(w, TensorId::W1);
  const Matrix& w2 = at(w, TensorId::W2);
  if (features.rows() != adjacency.size()) throw Error("encode: feature rows differ from node count");
  if (features.cols() != w1.rows()) throw Error("encode: feature dimension differs from W1 rows");
  if (w1.cols() != w2.rows()) throw Error("encode: W1 and W2 shapes disagree");
  Matrix xw(features.rows(), w1.cols());
  xw.noalias() = features * w1;
  Matrix hidden(features.rows(), w1.cols());
  hidden.noalias() = adjacency.matrix * xw;
  hidden = hidden.cwiseMax(0.0);
  Matrix hw(hidden.rows(), w2.cols());
  hw.noalias() = hidden * w2;
  Matrix z(hidden.rows(), w2.cols());
  z.noalias() = adjacency.matrix * hw;
  return z;
}

Var project(Var z, const std::array<Var, kTensorCount>& w) {
  const Var inner = ndiff::elu(ndiff::add_row(ndiff::matmul(z, w[static_cast<std::size_t>(TensorId::P1)]),
                                              w[static_cast<std::size_t>(TensorId::b1)]));
  return ndiff::add_row(ndiff::matmul(inner, w[static_cast<std::size_t>(TensorId::P2)]),
                        w[static_cast<std::size_t>(TensorId::b2)]);
}

Matrix project(const Matrix& z, const WeightSet& w) {
  Matrix inner(z.rows(), at(w, TensorId::P1).cols());
  inner.noalias() = z * at(w, TensorId::P1);
  inner.rowwise() += at(w, TensorId::b1).row(0);
  inner = inner.unaryExpr([](double x) { return x > 0.0 ? x : std::expm1(x); });
  Matrix h(z.rows(), at(w, TensorId::P2).cols());
  h.noalias() = inner * at(w, TensorId::P2);
  h.rowwise() += at(w, TensorId::b2).row(0);
  return h;
}

}  // namespace vgcl
