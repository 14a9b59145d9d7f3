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

#include <doctest.h>

#include <cmath>

#include "gradcheck.hpp"
#include "vgcl/ndiff/adam.hpp"

using namespace vgcl;
using namespace vgcl::testing;
namespace nd = vgcl::ndiff;

namespace {

Sparse<double> random_sparse(Index rows, Index cols, double density, Rng& rng) {
  std::vector<Eigen::Triplet<double, std::int64_t>> t;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (rng.bernoulli(density)) t.emplace_back(i, j, rng.uniform() * 2.0 - 1.0);
    }
  }
  Sparse<double> s(rows, cols);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

TEST_CASE("scalar softplus helpers") {
  CHECK(nd::softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(nd::softplus(50.0) == doctest::Approx(50.0).epsilon(1e-15));
  CHECK(nd::softplus(-800.0) >= 0.0);
  CHECK(std::isfinite(nd::softplus(800.0)));
  CHECK(nd::sigmoid(0.0) == 0.5);
  CHECK(nd::sigmoid(-800.0) == doctest::Approx(0.0));
  for (const double y : {1e-10, 0.01, 0.5, 3.0, 40.0}) {
    CHECK(nd::softplus(nd::inverse_softplus(y)) == doctest::Approx(y).epsilon(1e-12));
  }
}

TEST_CASE("elementwise and reduction gradients") {
  Rng rng(11, "test");
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_normal(3, 4, rng);
    const Matrix b = random_normal(3, 4, rng);
    const Matrix row = random_normal(1, 4, rng);
    const Matrix c = random_normal(4, 2, rng);
    const Matrix pos = random_normal(3, 4, rng).array().abs() + 0.5;
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::add(x[0], x[1]); }, {a, b}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::sub(x[0], x[1]); }, {a, b}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::hadamard(x[0], x[1]); }, {a, b}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::matmul(x[0], x[1]); }, {a, c}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::square(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::scale(x[0], -2.5); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::add_scalar(x[0], 0.3); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::add_row(x[0], x[1]); }, {a, row}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::relu(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::elu(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::exp(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::log(x[0]); }, {pos}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::softplus(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::sum(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::mean(x[0]); }, {a}, rng) < 1e-6);
    CHECK(gradcheck([](GradTape&, const auto& x) { return nd::row_l2_normalize(x[0]); }, {a}, rng) < 1e-6);
  }
}

TEST_CASE("sparse product gradient") {
  Rng rng(12, "test");
  const Sparse<double> s = random_sparse(5, 4, 0.5, rng);
  const Matrix d = random_normal(4, 3, rng);
  CHECK(gradcheck([&](GradTape&, const auto& x) { return nd::spmm(s, x[0]); }, {d}, rng) < 1e-6);
}

TEST_CASE("reused variables accumulate gradients") {
  GradTape tape;
  Matrix v(1, 2);
  v << 2.0, -3.0;
  auto x = tape.parameter(v);
  auto loss = nd::sum(nd::hadamard(x, x));  // sum x^2
  tape.backward(loss);
  CHECK(x.grad()(0, 0) == 4.0);
  CHECK(x.grad()(0, 1) == -6.0);
}

TEST_CASE("unused nodes and constants receive zero gradient") {
  GradTape tape;
  auto x = tape.parameter(Matrix::Ones(2, 2));
  auto unused = tape.parameter(Matrix::Ones(2, 2));
  auto c = tape.constant(Matrix::Ones(2, 2));
  auto loss = nd::sum(nd::hadamard(x, c));
  tape.backward(loss);
  CHECK(unused.grad().isZero());
  CHECK(c.grad().isZero());
  CHECK_FALSE(c.requires_grad());
}

TEST_CASE("backward twice without reset is an error") {
  GradTape tape;
  auto x = tape.parameter(Matrix::Ones(1, 1));
  auto loss = nd::square(x);
  tape.backward(loss);
  CHECK_THROWS_AS(tape.backward(loss), Error);
  tape.reset();
  tape.backward(loss);
  CHECK(x.grad()(0, 0) == 2.0);
}

TEST_CASE("backward needs a scalar") {
  GradTape tape;
  auto x = tape.parameter(Matrix::Ones(2, 1));
  CHECK_THROWS_AS(tape.backward(x), Error);
}

TEST_CASE("shape mismatches and invalid inputs") {
  GradTape tape;
  auto a = tape.parameter(Matrix::Ones(2, 3));
  auto b = tape.parameter(Matrix::Ones(3, 2));
  CHECK_THROWS_AS(nd::add(a, b), Error);
  CHECK_THROWS_AS(nd::matmul(a, a), Error);
  CHECK_THROWS_AS(nd::log(tape.parameter(Matrix::Zero(1, 1))), Error);
}

TEST_CASE("row normalization of a zero row stays finite") {
  GradTape tape;
  Matrix v = Matrix::Zero(2, 3);
  v.row(1) << 3.0, 4.0, 0.0;
  auto x = tape.parameter(v);
  auto y = nd::row_l2_normalize(x);
  CHECK(y.value().row(0).isZero());
  CHECK(y.value()(1, 0) == doctest::Approx(0.6));
  tape.backward(nd::sum(y));
  CHECK(x.grad().allFinite());
}

TEST_CASE("adam first step moves each coordinate by about lr against the gradient") {
  nd::AdamState<double> state;
  state.lr = 0.1;
  std::vector<Matrix> params{Matrix::Zero(1, 3)};
  Matrix g(1, 3);
  g << 2.0, -0.5, 1e-3;
  std::vector<Matrix> grads{g};
  nd::adam_step<double>(params, grads, state);
  CHECK(state.step == 1);
  for (Index k = 0; k < 3; ++k) {
    const double expected = -0.1 * g(0, k) / (std::abs(g(0, k)) + 1e-8);
    CHECK(params[0](0, k) == doctest::Approx(expected).epsilon(1e-12));
  }
  std::vector<Matrix> wrong{Matrix::Zero(2, 2)};
  CHECK_THROWS_AS(nd::adam_step<double>(params, wrong, state), Error);
}

TEST_CASE("adam converges on a quadratic") {
  nd::AdamState<double> state;
  state.lr = 0.05;
  std::vector<Matrix> params{Matrix::Constant(2, 2, 3.0)};
  for (int i = 0; i < 2000; ++i) {
    std::vector<Matrix> grads{2.0 * (params[0].array() - 1.0).matrix()};
    nd::adam_step<double>(params, grads, state);
  }
  CHECK((params[0].array() - 1.0).abs().maxCoeff() < 1e-3);
}
