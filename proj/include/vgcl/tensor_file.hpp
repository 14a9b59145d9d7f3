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
#include <string>
#include <vector>

#include "vgcl/types.hpp"

namespace vgcl {

struct NamedTensor {
  std::string name;
  Matrix value;
};

/// Writes `weights.bin`-style tensor files: the 8-byte magic "VGCL0001", then per
/// tensor a u32 name length, the name bytes, a u32 rank, u64 dims and the
/// row-major f64 values. Integers and floats are little-endian.
void write_tensors(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);

std::vector<NamedTensor> read_tensors(const std::filesystem::path& path);

}  // namespace vgcl
