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
#include <string>

#include "vgcl/ndiff/tape.hpp"

namespace vgcl::ndiff {

namespace detail {

inline void check_same_shape(Index ar, Index ac, Index br, Index bc, const char* op) {
  if (ar != br || ac != bc) {
    throw Error(std::string(op) + ": shape mismatch " + std::to_string(ar) + "x" + std::to_string(ac) + " vs " +
                std::to_string(br) + "x" + std::to_string(bc));
  }
}

}  // namespace detail

/// Norm floor used by row_l2_normalize.
inline constexpr double kNormEpsilon = 1e-12;

/// log(1 + exp(x)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar x) {
  return x > Scalar(20) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= 0) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Inverse of softplus for y > 0.
template <typename Scalar>
Scalar inverse_softplus(Scalar y) {
  return y > Scalar(20) ? y + std::log(-std::expm1(-y)) : std::log(std::expm1(y));
}

template <typename Scalar>
Var<Scalar> matmul(Var<Scalar> a, Var<Scalar> b) {
  if (a.cols() != b.rows()) {
    throw Error("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
  }
  Dense<Scalar> out(a.rows(), b.cols());
  out.noalias() = a.value() * b.value();
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape<Scalar>& t, std::size_t self) {
    const auto& g = t.upstream(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

/// Sparse-dense product. `s` must outlive the tape.
template <typename Scalar>
Var<Scalar> spmm(const Sparse<Scalar>& s, Var<Scalar> d) {
  if (s.cols() != d.rows()) {
    throw Error("spmm: inner dimensions differ (" + std::to_string(s.cols()) + " vs " + std::to_string(d.rows()) + ")");
  }
  Dense<Scalar> out(s.rows(), d.cols());
  out.noalias() = s * d.value();
  const auto id = d.id();
  const Sparse<Scalar>* sp = &s;
  return d.tape().record(std::move(out), {d}, [sp, id](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(id, sp->transpose() * t.upstream(self));
  });
}

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "add");
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(a.value() + b.value(), {a, b}, [ia, ib](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
    t.accumulate(ib, t.upstream(self));
  });
}

template <typename Scalar>
Var<Scalar> sub(Var<Scalar> a, Var<Scalar> b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "sub");
  const auto ia = a.id(), ib = b.id();
  return a.tape().record(a.value() - b.value(), {a, b}, [ia, ib](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
    t.accumulate(ib, -t.upstream(self));
  });
}

/// Elementwise product.
template <typename Scalar>
Var<Scalar> hadamard(Var<Scalar> a, Var<Scalar> b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "hadamard");
  const auto ia = a.id(), ib = b.id();
  Dense<Scalar> out = a.value().cwiseProduct(b.value());
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape<Scalar>& t, std::size_t self) {
    const auto& g = t.upstream(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.requires_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

template <typename Scalar>
Var<Scalar> square(Var<Scalar> a) {
  const auto ia = a.id();
  return a.tape().record(a.value().array().square().matrix(), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, Scalar(2) * t.upstream(self).cwiseProduct(t.value(ia)));
  });
}

template <typename Scalar>
Var<Scalar> scale(Var<Scalar> a, Scalar factor) {
  const auto ia = a.id();
  return a.tape().record(a.value() * factor, {a}, [ia, factor](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self) * factor);
  });
}

template <typename Scalar>
Var<Scalar> add_scalar(Var<Scalar> a, Scalar offset) {
  const auto ia = a.id();
  Dense<Scalar> out = a.value().array() + offset;
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
  });
}

/// Adds the 1 x c row vector `row` to every row of `a`.
template <typename Scalar>
Var<Scalar> add_row(Var<Scalar> a, Var<Scalar> row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw Error("add_row: bias must be 1 x cols");
  const auto ia = a.id(), ir = row.id();
  Dense<Scalar> out = a.value().rowwise() + row.value().row(0);
  return a.tape().record(std::move(out), {a, row}, [ia, ir](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
    if (t.requires_grad(ir)) t.accumulate(ir, t.upstream(self).colwise().sum());
  });
}

template <typename Scalar>
Var<Scalar> relu(Var<Scalar> a) {
  const auto ia = a.id();
  Dense<Scalar> out = a.value().cwiseMax(Scalar(0));
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    const auto& x = t.value(ia);
    t.accumulate(ia, (x.array() > Scalar(0)).select(t.upstream(self), Scalar(0)).matrix());
  });
}

/// ELU with alpha = 1.
template <typename Scalar>
Var<Scalar> elu(Var<Scalar> a) {
  const auto ia = a.id();
  Dense<Scalar> out = a.value().unaryExpr([](Scalar x) { return x > Scalar(0) ? x : std::expm1(x); });
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    const auto& x = t.value(ia);
    const Dense<Scalar> slope = x.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : std::exp(v); });
    t.accumulate(ia, t.upstream(self).cwiseProduct(slope));
  });
}

template <typename Scalar>
Var<Scalar> exp(Var<Scalar> a) {
  const auto ia = a.id();
  return a.tape().record(a.value().array().exp().matrix(), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self).cwiseProduct(t.value(self)));
  });
}

template <typename Scalar>
Var<Scalar> log(Var<Scalar> a) {
  if ((a.value().array() <= Scalar(0)).any()) throw Error("log: argument must be strictly positive");
  const auto ia = a.id();
  return a.tape().record(a.value().array().log().matrix(), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self).cwiseQuotient(t.value(ia)));
  });
}

template <typename Scalar>
Var<Scalar> softplus(Var<Scalar> a) {
  const auto ia = a.id();
  Dense<Scalar> out = a.value().unaryExpr([](Scalar x) { return softplus(x); });
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    const Dense<Scalar> slope = t.value(ia).unaryExpr([](Scalar x) { return sigmoid(x); });
    t.accumulate(ia, t.upstream(self).cwiseProduct(slope));
  });
}

template <typename Scalar>
Var<Scalar> sum(Var<Scalar> a) {
  const auto ia = a.id();
  Dense<Scalar> out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, std::size_t self) {
    const Scalar g = t.upstream(self)(0, 0);
    const auto& x = t.value(ia);
    t.accumulate(ia, Dense<Scalar>::Constant(x.rows(), x.cols(), g));
  });
}

template <typename Scalar>
Var<Scalar> mean(Var<Scalar> a) {
  return scale(sum(a), Scalar(1) / static_cast<Scalar>(a.value().size()));
}

/// Scales each row to unit Euclidean norm. Rows with norm below kNormEpsilon
/// are divided by (norm + kNormEpsilon) instead.
template <typename Scalar>
Var<Scalar> row_l2_normalize(Var<Scalar> a) {
  const auto ia = a.id();
  const auto& x = a.value();
  Vector<Scalar> norms = x.rowwise().norm();
  Vector<Scalar> divisors = norms.unaryExpr([](Scalar r) { return r < Scalar(kNormEpsilon) ? r + Scalar(kNormEpsilon) : r; });
  Dense<Scalar> out = divisors.cwiseInverse().asDiagonal() * x;
  return a.tape().record(std::move(out), {a}, [ia, norms = std::move(norms), divisors = std::move(divisors)](
                                                 Tape<Scalar>& t, std::size_t self) {
    const auto& x = t.value(ia);
    const auto& g = t.upstream(self);
    Dense<Scalar> dx(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) {
      const Scalar c = divisors[i];
      dx.row(i) = g.row(i) / c;
      if (norms[i] > Scalar(0)) {
        const Scalar xg = x.row(i).dot(g.row(i));
        dx.row(i) -= x.row(i) * (xg / (c * c * norms[i]));
      }
    }
    t.accumulate(ia, dx);
  });
}

}  // namespace vgcl::ndiff
