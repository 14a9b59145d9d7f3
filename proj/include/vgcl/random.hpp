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
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "vgcl/error.hpp"
#include "vgcl/types.hpp"

namespace vgcl {

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text,
                              std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

/// Seeded generator for one named sub-stream of a run.
///
/// All randomness in a run derives from one integer seed; each consumer
/// (augmentation, weight noise, splits, ...) owns the stream named after it,
/// so drawing more from one stream never shifts another. Distributions are
/// implemented here rather than with <random> distribution objects: those
/// carry hidden state and are implementation-defined, which would break
/// checkpoint/resume bit-identity.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream) {
    const std::uint64_t tag = fnv1a(stream);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// True with probability p; p = 0 never fires, p = 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Fills m with independent standard normals (Box-Muller, both branches used).
  template <typename Derived>
  void fill_normal(Eigen::PlainObjectBase<Derived>& m) {
    const Index size = m.size();
    auto* data = m.data();
    for (Index k = 0; k < size; k += 2) {
      const double u1 = 1.0 - uniform();  // (0, 1]
      const double u2 = uniform();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      data[k] = radius * std::cos(angle);
      if (k + 1 < size) data[k + 1] = radius * std::sin(angle);
    }
  }

  /// Number of 64-bit words consumed so far; identifies a draw within the stream.
  std::uint64_t draws() const { return draws_; }

  std::string state() const {
    std::ostringstream out;
    out << draws_ << ' ' << engine_;
    return out.str();
  }

  void restore(const std::string& state) {
    std::istringstream in(state);
    in >> draws_ >> engine_;
    if (!in) throw Error("corrupt random-generator state");
  }

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.draws_ == b.draws_ && a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace vgcl
