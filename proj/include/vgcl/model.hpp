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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "vgcl/augment.hpp"
#include "vgcl/graphio.hpp"
#include "vgcl/ndiff/ops.hpp"
#include "vgcl/random.hpp"

namespace vgcl {

/// Learnable tensors: GCN layers W1, W2 and the projection head (P1, b1, P2, b2).
enum class TensorId : std::size_t { W1, W2, P1, b1, P2, b2 };

inline constexpr std::size_t kTensorCount = 6;
inline constexpr std::array<std::string_view, kTensorCount> kTensorNames{"W1", "W2", "P1", "b1", "P2", "b2"};

using WeightSet = std::array<Matrix, kTensorCount>;

inline Matrix& at(WeightSet& set, TensorId id) { return set[static_cast<std::size_t>(id)]; }
inline const Matrix& at(const WeightSet& set, TensorId id) { return set[static_cast<std::size_t>(id)]; }

struct EncoderConfig {
  Index in_dim = 0;
  Index hidden = 128;
  Index out = 128;
  Index proj_hidden = 128;

  void validate() const;
  /// Shape (rows, cols) of each tensor.
  std::array<std::pair<Index, Index>, kTensorCount> shapes() const;
};

enum class ModelKind { deterministic, variational };

/// Weights of a deterministic model, or the Gaussian family q(w) = N(mean, softplus(spread)^2)
/// of a variational one.
struct ModelParams {
  ModelKind kind = ModelKind::deterministic;
  EncoderConfig config;
  WeightSet mean;
  WeightSet spread;  // empty matrices for deterministic models

  bool variational() const { return kind == ModelKind::variational; }

  /// Standard deviations softplus(spread).
  WeightSet sigma() const;

  /// Optimizer view: means, then spreads for variational models.
  std::vector<Matrix> flatten() const;
  void unflatten(const std::vector<Matrix>& flat);
};

/// One concrete draw w = mean + softplus(spread) * noise.
struct WeightSample {
  WeightSet weights;
  WeightSet noise;
  std::uint64_t draw_id = 0;
};

/// Glorot-uniform means, zero biases; variational spreads start at softplus^-1(init_sigma).
ModelParams init_params(const EncoderConfig& config, Rng& rng, ModelKind kind, double init_sigma = 0.01);

/// Fresh standard-normal noise from `rng`; deterministic models return the means and draw nothing.
WeightSample sample_weights(const ModelParams& params, Rng& rng);

using Var = ndiff::Var<double>;
using Tape = ndiff::Tape<double>;

/// Parameter leaves and effective weights of one forward pass on a tape.
struct TapeWeights {
  std::array<Var, kTensorCount> weights;
  std::array<Var, kTensorCount> mean;
  std::array<Var, kTensorCount> spread;  // unset for deterministic models
};

/// Records parameters as leaves. With `noise`, the effective weights are the
/// reparameterized sample mean + softplus(spread) * noise.
TapeWeights weights_on_tape(Tape& tape, const ModelParams& params, const WeightSet* noise);

/// Z = A relu(A X W1) W2.
Var encode(const NormalizedAdjacency<double>& adjacency, const SparseMatrix& features,
           const std::array<Var, kTensorCount>& w);
Matrix encode(const NormalizedAdjacency<double>& adjacency, const SparseMatrix& features, const WeightSet& w);

/// H = elu(Z P1 + b1) P2 + b2.
Var project(Var z, const std::array<Var, kTensorCount>& w);
Matrix project(const Matrix& z, const WeightSet& w);

}  // namespace vgcl
