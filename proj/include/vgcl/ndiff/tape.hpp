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

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "vgcl/error.hpp"
#include "vgcl/types.hpp"

namespace vgcl::ndiff {

template <typename Scalar>
class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
template <typename Scalar>
class Var {
 public:
  Var() = default;
  Var(Tape<Scalar>* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Dense<Scalar>& value() const { return tape_->value(id_); }
  const Dense<Scalar>& grad() const { return tape_->grad(id_); }
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  Tape<Scalar>& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool requires_grad() const { return tape_->requires_grad(id_); }

 private:
  Tape<Scalar>* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of one computation.
///
/// Nodes are appended in evaluation order, so the append order is a
/// topological order and backward() walks it once in reverse. A tape is meant
/// to be built for a single loss evaluation and then discarded.
template <typename Scalar>
class Tape {
 public:
  using Matrix = Dense<Scalar>;
  /// Propagates the gradient of node `self` into its parents.
  using Backward = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives a gradient.
  Var<Scalar> constant(Matrix value) { return push(std::move(value), false, {}); }

  /// Leaf whose gradient is collected by backward().
  Var<Scalar> parameter(Matrix value) { return push(std::move(value), true, {}); }

  /// Records an operation result. The backward function is kept only when
  /// some parent requires a gradient.
  Var<Scalar> record(Matrix value, std::initializer_list<Var<Scalar>> parents, Backward backward) {
    bool needs_grad = false;
    for (const auto& parent : parents) needs_grad = needs_grad || requires_grad(parent.id());
#ifndef NDEBUG
    if (!value.allFinite()) throw NumericalError("non-finite value produced on the tape");
#endif
    return push(std::move(value), needs_grad, needs_grad ? std::move(backward) : Backward{});
  }

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  /// Gradient of the last backward() loss w.r.t. node `id`; zeros when the
  /// node does not influence the loss.
  const Matrix& grad(std::size_t id) {
    auto& node = nodes_[id];
    if (node.grad.size() == 0) node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
    return node.grad;
  }

  /// Adds `contribution` to the gradient of node `id` if it requires one.
  template <typename Expr>
  void accumulate(std::size_t id, const Expr& contribution) {
    auto& node = nodes_[id];
    if (!node.requires_grad) return;
    if (node.grad.size() == 0) {
      node.grad = contribution;
    } else {
      node.grad += contribution;
    }
  }

  /// Gradient flowing into node `id` during backward().
  const Matrix& upstream(std::size_t id) const { return nodes_[id].grad; }

  void backward(Var<Scalar> loss) {
    if (backward_done_) throw Error("backward() called twice without reset()");
    const auto& out = nodes_[loss.id()];
    if (out.value.rows() != 1 || out.value.cols() != 1) throw Error("backward() needs a scalar loss");
    backward_done_ = true;
    nodes_[loss.id()].grad = Matrix::Ones(1, 1);
    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      auto& node = nodes_[i];
      if (!node.backward || node.grad.size() == 0) continue;
      node.backward(*this, i);
    }
  }

  /// Clears gradients so backward() may run again.
  void reset() {
    for (auto& node : nodes_) node.grad.resize(0, 0);
    backward_done_ = false;
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    bool requires_grad = false;
  };

  Var<Scalar> push(Matrix value, bool requires_grad, Backward backward) {
    nodes_.push_back(Node{std::move(value), Matrix{}, std::move(backward), requires_grad});
    return Var<Scalar>(this, nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace vgcl::ndiff
