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

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vgcl/config.hpp"
#include "vgcl/graphio.hpp"
#include "vgcl/model.hpp"
#include "vgcl/ndiff/adam.hpp"

namespace vgcl {

struct EpochRecord {
  int epoch = 0;
  double infonce = 0.0;
  double kl = 0.0;
  double hyperprior = 0.0;
  double total = 0.0;
  bool is_best = false;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  /// Epoch with the smallest contrastive loss, -1 before the first epoch.
  int best_epoch = -1;
};

/// Everything needed to run the next epoch bit-identically.
struct TrainState {
  ModelParams params;
  ndiff::AdamState<double> optimizer;
  Rng augment_rng{0, "augment"};
  Rng weight_rng{0, "weights"};
  /// Index of the next epoch to run.
  int epoch = 0;
  double best_infonce = std::numeric_limits<double>::infinity();
  TrainLog log;
};

/// A saved TrainState. `loss` is the contrastive loss logged for `state.epoch`
/// when the checkpoint marks a best epoch.
struct Checkpoint {
  TrainState state;
  std::optional<double> loss;
  std::string config_hash;
  TrainConfig config;
  /// Name recorded in the training dataset's meta.json.
  std::string dataset;
};

/// Writes weights.bin and checkpoint.json into `dir`.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& dir);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

struct TrainResult {
  Checkpoint best;
  Checkpoint last;
  TrainLog log;
};

/// Output layout under `out_dir` (skipped when empty): weights.bin and
/// checkpoint.json of the best epoch, last/ with the final state, trainlog.csv.
TrainResult train(const Graph& graph, const TrainConfig& config, const std::filesystem::path& out_dir = {});

/// Continues from a checkpoint up to config.epochs. The checkpoint's config hash must match.
TrainResult resume(const Graph& graph, const TrainConfig& config, const std::filesystem::path& checkpoint_dir,
                   const std::filesystem::path& out_dir = {});

std::string trainlog_csv(const TrainLog& log);

}  // namespace vgcl
