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
#include <span>
#include <vector>

#include "vgcl/error.hpp"
#include "vgcl/types.hpp"

namespace vgcl::ndiff {

template <typename Scalar>
struct AdamState {
  Scalar lr = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  std::int64_t step = 0;
  std::vector<Dense<Scalar>> first_moment;
  std::vector<Dense<Scalar>> second_moment;
};

/// One Adam update with bias correction, in place. Moment buffers are
/// created on the first call.
template <typename Scalar>
void adam_step(std::span<Dense<Scalar>> params, std::span<const Dense<Scalar>> grads, AdamState<Scalar>& state) {
  if (params.size() != grads.size()) throw Error("adam_step: parameter and gradient counts differ");
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Dense<Scalar>::Zero(p.rows(), p.cols()));
      state.second_moment.push_back(Dense<Scalar>::Zero(p.rows(), p.cols()));
    }
  }
  if (state.first_moment.size() != params.size()) throw Error("adam_step: optimizer state does not match parameters");
  ++state.step;
  const Scalar correction1 = Scalar(1) - std::pow(state.beta1, static_cast<Scalar>(state.step));
  const Scalar correction2 = Scalar(1) - std::pow(state.beta2, static_cast<Scalar>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = params[k];
    const auto& g = grads[k];
    if (p.rows() != g.rows() || p.cols() != g.cols()) throw Error("adam_step: gradient shape differs from parameter");
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    m = state.beta1 * m + (Scalar(1) - state.beta1) * g;
    v = state.beta2 * v + (Scalar(1) - state.beta2) * g.cwiseAbs2();
    p.array() -= state.lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + state.eps);
  }
}

}  // namespace vgcl::ndiff
