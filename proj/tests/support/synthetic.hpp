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
#include <functional>
#include <string>

#include "vgcl/graphio.hpp"
#include "vgcl/random.hpp"

namespace vgcl::testing {

/// Stochastic block graph with class-correlated bag-of-words features.
struct SyntheticSpec {
  Index nodes = 200;
  Index classes = 4;
  Index features = 64;
  double mean_degree = 4.0;
  /// Share of a node's edges that stay inside its class.
  double homophily = 0.8;
  Index words_per_node = 8;
  /// Probability that a word comes from the node's class topic instead of the full vocabulary.
  double topic_strength = 0.7;
  std::uint64_t seed = 1;
  std::string name = "synthetic";
};

Graph synthetic_graph(const SyntheticSpec& spec);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

/// Matrix with i.i.d. standard normal entries.
Matrix random_normal(Index rows, Index cols, Rng& rng);

/// Central finite-difference gradient of f at x.
Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x, double step = 1e-6);

/// ||a - b|| / max(||a||, ||b||), or 0 when both vanish.
double relative_error(const Matrix& a, const Matrix& b);

}  // namespace vgcl::testing
