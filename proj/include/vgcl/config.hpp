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
#include <filesystem>
#include <string>

#include <json.hpp>

#include "vgcl/augment.hpp"
#include "vgcl/model.hpp"
#include "vgcl/objective.hpp"

namespace vgcl {

struct TrainConfig {
  TrainingMode mode = TrainingMode::infonce;
  int epochs = 150;
  double lr = 1e-2;
  /// Monte Carlo weight samples per step; forced to 1 for infonce.
  int samples = 20;
  AugmentConfig augment;
  PriorConfig prior;
  ContrastiveConfig contrastive;
  /// in_dim is taken from the dataset.
  EncoderConfig encoder;
  double init_sigma = 0.01;
  std::uint64_t seed = 0;
  /// Writes zero wall-clock times so logs are byte-identical across runs.
  bool strict_deterministic = false;

  void validate() const;
  ObjectiveConfig objective() const;
  ModelKind model_kind() const {
    return mode == TrainingMode::infonce ? ModelKind::deterministic : ModelKind::variational;
  }
};

struct EvalConfig {
  int runs = 20;
  /// Weight samples averaged per embedding (variational models).
  int samples = 100;
  bool standardize = false;
};

struct UncertaintyConfig {
  int draws = 50;
};

/// Everything a run needs, loaded from one JSON document.
struct RunConfig {
  std::string dataset;
  TrainConfig train;
  EvalConfig eval;
  UncertaintyConfig uncertainty;

  void validate() const;
};

/// Strict parse: unknown keys and wrong types are errors naming the key path.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const TrainConfig& config);
TrainConfig parse_train_config(const nlohmann::json& doc);

/// Hash of every training setting that shapes the trajectory (all but epochs
/// and strict_deterministic), as 16 hex digits.
std::string config_hash(const TrainConfig& config);

}  // namespace vgcl
