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

#include <functional>
#include <vector>

#include "synthetic.hpp"
#include "vgcl/ndiff/ops.hpp"
#include "vgcl/ndiff/tape.hpp"

namespace vgcl::testing {

using GradVar = ndiff::Var<double>;
using GradTape = ndiff::Tape<double>;

/// Builds the tested expression from parameter leaves recorded in order.
using Builder = std::function<GradVar(GradTape&, const std::vector<GradVar>&)>;

/// Largest relative error between tape gradients and central differences over
/// all inputs. Non-scalar outputs are contracted with a fixed random matrix.
inline double gradcheck(const Builder& build, const std::vector<Matrix>& inputs, Rng& rng, double step = 1e-6) {
  Matrix contraction;
  auto evaluate = [&](const std::vector<Matrix>& values, std::vector<Matrix>* grads) {
    GradTape tape;
    std::vector<GradVar> leaves;
    for (const auto& v : values) leaves.push_back(tape.parameter(v));
    GradVar out = build(tape, leaves);
    if (contraction.size() == 0) contraction = random_normal(out.rows(), out.cols(), rng);
    GradVar loss = out.rows() == 1 && out.cols() == 1 && contraction.size() == 1
                       ? out
                       : ndiff::sum(ndiff::hadamard(out, tape.constant(contraction)));
    const double value = loss.value()(0, 0);
    if (grads) {
      tape.backward(loss);
      grads->clear();
      for (const auto& leaf : leaves) grads->push_back(leaf.grad());
    }
    return value;
  };

  std::vector<Matrix> analytic;
  evaluate(inputs, &analytic);
  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    std::vector<Matrix> probe = inputs;
    const Matrix numeric = numeric_gradient(
        [&](const Matrix& x) {
          probe[k] = x;
          return evaluate(probe, nullptr);
        },
        inputs[k], step);
    worst = std::max(worst, relative_error(analytic[k], numeric));
  }
  return worst;
}

}  // namespace vgcl::testing
