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

#include "vgcl/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vgcl {

void ContrastiveConfig::validate() const {
  if (!(tau > 0)) throw Error("contrastive.tau must be positive");
  if (block_rows < 1) throw Error("contrastive.block_rows must be >= 1");
  if (dense_limit < 0) throw Error("contrastive.dense_limit must be >= 0");
}

void PriorConfig::validate() const {
  if (!(sigma2 > 0)) throw Error("prior.sigma2 must be positive");
  if (sigma0 && !(*sigma0 > 0)) throw Error("prior.sigma0 must be positive");
  if (sigma_p2 && !(*sigma_p2 > 0)) throw Error("prior.sigma_p2 must be positive");
  if (kl_scale && !(*kl_scale >= 0)) throw Error("prior.kl_scale must be nonnegative");
  if (hp_scale && !(*hp_scale >= 0)) throw Error("prior.hp_scale must be nonnegative");
}

double PriorConfig::kl_weight(Index num_nodes) const {
  return kl_scale.value_or(1.0 / static_cast<double>(num_nodes));
}

double PriorConfig::hp_weight(Index num_nodes) const { return hp_scale.value_or(kl_weight(num_nodes)); }

std::string to_string(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::infonce: return "infonce";
    case TrainingMode::vi_infonce: return "vi_infonce";
    case TrainingMode::vgcl: return "vgcl";
  }
  return "infonce";
}

TrainingMode training_mode_from_string(const std::string& text) {
  if (text == "infonce") return TrainingMode::infonce;
  if (text == "vi_infonce" || text == "vi") return TrainingMode::vi_infonce;
  if (text == "vgcl") return TrainingMode::vgcl;
  throw Error("unknown mode '" + text + "' (expected infonce, vi_infonce or vgcl)");
}

namespace {

/// Turns rows of logits into loss values and loss gradients.
///
/// Row r of `cross` holds the logits of anchor i = first_row + r against every
/// node of the other view (the positive sits at column i); row r of `same`
/// holds the logits against nodes of the anchor's own view. On return `cross`
/// and `same` contain d loss_i / d logits (softmax minus the positive indicator;
/// the excluded self-similarity gets 0) and `loss` holds loss_i.
void softmax_rows(Matrix& cross, Matrix& same, Index first_row, bool intra, Eigen::Ref<VectorXd> loss) {
  const Index rows = cross.rows();
  const Index n = cross.cols();
  // exp and sum run on aligned scratch rows so results do not depend on the row's address
  Eigen::ArrayXd cross_exp(n), same_exp(n);
  for (Index r = 0; r < rows; ++r) {
    const Index i = first_row + r;
    double peak = cross.row(r).maxCoeff();
    if (intra) {
      for (Index k = 0; k < n; ++k) {
        if (k != i) peak = std::max(peak, same(r, k));
      }
    }
    cross_exp = (cross.row(r).transpose().array() - peak).exp();
    double total = cross_exp.sum();
    if (intra) {
      same_exp = (same.row(r).transpose().array() - peak).exp();
      same_exp[i] = 0.0;
      total += same_exp.sum();
    }
    loss[r] = peak + std::log(total) - cross(r, i);
    const double inv_total = 1.0 / total;
    cross.row(r) = (cross_exp * inv_total).matrix().transpose();
    cross(r, i) -= 1.0;
    if (intra) {
      same.row(r) = (same_exp * inv_total).matrix().transpose();
    } else {
      same.row(r).setZero();
    }
  }
}

struct NtXentValue {
  VectorXd anchor_first;   // loss of u_i against view 2
  VectorXd anchor_second;  // loss of v_i against view 1
  Matrix grad_first;       // d mean-loss / d U
  Matrix grad_second;      // d mean-loss / d V
};

NtXentValue nt_xent_dense(const Matrix& u, const Matrix& v, double tau, bool intra, bool want_grad) {
  const Index n = u.rows();
  NtXentValue out;
  out.anchor_first.resize(n);
  out.anchor_second.resize(n);
  const double inv_tau = 1.0 / tau;

  // one product per orientation, swap-exact
  Matrix cross(n, n), cross_t(n, n);
  cross.noalias() = (u * v.transpose()) * inv_tau;
  cross_t.noalias() = (v * u.transpose()) * inv_tau;
  Matrix same_u(n, n), same_v(n, n);
  if (intra) {
    same_u.noalias() = (u * u.transpose()) * inv_tau;
    same_v.noalias() = (v * v.transpose()) * inv_tau;
  } else {
    same_u.setZero();
    same_v.setZero();
  }
  softmax_rows(cross, same_u, 0, intra, out.anchor_first);
  softmax_rows(cross_t, same_v, 0, intra, out.anchor_second);
  if (!want_grad) return out;

  // loss = (1 / 2n) sum_i (l(u_i) + l(v_i)); logits carry the 1/tau factor.
  const double c = inv_tau / (2.0 * static_cast<double>(n));
  cross += cross_t.transpose();
  out.grad_first.resize(n, u.cols());
  out.grad_second.resize(n, v.cols());
  out.grad_first.noalias() = c * (cross * v);
  out.grad_second.noalias() = c * (cross.transpose() * u);
  if (intra) {
    Matrix sym = same_u + same_u.transpose();
    out.grad_first.noalias() += c * (sym * u);
    sym = same_v + same_v.transpose();
    out.grad_second.noalias() += c * (sym * v);
  }
  return out;
}

NtXentValue nt_xent_blocked(const Matrix& u, const Matrix& v, double tau, bool intra, bool want_grad,
                            Index block_rows) {
  const Index n = u.rows();
  NtXentValue out;
  out.anchor_first.resize(n);
  out.anchor_second.resize(n);
  if (want_grad) {
    out.grad_first = Matrix::Zero(n, u.cols());
    out.grad_second = Matrix::Zero(n, v.cols());
  }
  const double inv_tau = 1.0 / tau;
  const double c = inv_tau / (2.0 * static_cast<double>(n));

  // anchor side: rows of `anchor` against `other` (cross view) and `anchor` (same view).
  auto run_side = [&](const Matrix& anchor, const Matrix& other, VectorXd& loss, Matrix& grad_anchor,
                      Matrix& grad_other) {
    for (Index start = 0; start < n; start += block_rows) {
      const Index rows = std::min(block_rows, n - start);
      const auto block = anchor.middleRows(start, rows);
      Matrix cross(rows, n);
      cross.noalias() = (block * other.transpose()) * inv_tau;
      Matrix same(rows, n);
      if (intra) {
        same.noalias() = (block * anchor.transpose()) * inv_tau;
      } else {
        same.setZero();
      }
      softmax_rows(cross, same, start, intra, loss.segment(start, rows));
      if (!want_grad) continue;
      grad_anchor.middleRows(start, rows).noalias() += c * (cross * other);
      grad_other.noalias() += c * (cross.transpose() * block);
      if (intra) {
        grad_anchor.middleRows(start, rows).noalias() += c * (same * anchor);
        grad_anchor.noalias() += c * (same.transpose() * block);
      }
    }
  };
  run_side(u, v, out.anchor_first, out.grad_first, out.grad_second);
  run_side(v, u, out.anchor_second, out.grad_second, out.grad_first);
  return out;
}

}  // namespace

ContrastiveLoss nt_xent(Var h1, Var h2, const ContrastiveConfig& config) {
  config.validate();
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols()) throw Error("nt_xent: views have different shapes");
  const Index n = h1.rows();
  if (n < 2) throw Error("nt_xent: at least two nodes are needed for negatives");

  const Var u = ndiff::row_l2_normalize(h1);
  const Var v = ndiff::row_l2_normalize(h2);
  const bool intra = config.negatives == Negatives::inter_and_intra;
  const bool want_grad = u.requires_grad() || v.requires_grad();
  NtXentValue result = n > config.dense_limit
                           ? nt_xent_blocked(u.value(), v.value(), config.tau, intra, want_grad, config.block_rows)
                           : nt_xent_dense(u.value(), v.value(), config.tau, intra, want_grad);

  ContrastiveLoss out;
  out.per_node = 0.5 * (result.anchor_first + result.anchor_second);
  Matrix value(1, 1);
  value(0, 0) = out.per_node.mean();
  const auto iu = u.id(), iv = v.id();
  out.loss = h1.tape().record(
      std::move(value), {u, v},
      [iu, iv, gu = std::move(result.grad_first), gv = std::move(result.grad_second)](Tape& t, std::size_t self) {
        const double g = t.upstream(self)(0, 0);
        t.accumulate(iu, g * gu);
        t.accumulate(iv, g * gv);
      });
  return out;
}

LossBreakdown nt_xent(const Matrix& h1, const Matrix& h2, const ContrastiveConfig& config) {
  Tape tape;
  const auto result = nt_xent(tape.constant(h1), tape.constant(h2), config);
  LossBreakdown out;
  out.per_node = result.per_node;
  out.infonce = result.loss.value()(0, 0);
  out.total = out.infonce;
  return out;
}

Var kl_gaussian(Var mean, Var spread, double sigma2) {
  const Var sigma = ndiff::softplus(spread);
  const Var quadratic = ndiff::scale(ndiff::add(ndiff::square(sigma), ndiff::square(mean)), 1.0 / (2.0 * sigma2));
  const Var terms = ndiff::add_scalar(ndiff::sub(quadratic, ndiff::log(sigma)), 0.5 * std::log(sigma2) - 0.5);
  return ndiff::sum(terms);
}

double kl_gaussian(const ModelParams& params, double sigma2) {
  if (!params.variational()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    Tape tape;
    total += kl_gaussian(tape.constant(params.mean[k]), tape.constant(params.spread[k]), sigma2).value()(0, 0);
  }
  return total;
}

Var hyperprior_penalty(Var mean, Var spread, const PriorConfig& prior) {
  Tape& tape = mean.tape();
  Var total = tape.constant(Matrix::Zero(1, 1));
  if (prior.sigma0) {
    const double s0 = *prior.sigma0;
    total = ndiff::add(total, ndiff::scale(ndiff::sum(ndiff::square(mean)), 1.0 / (2.0 * s0 * s0)));
  }
  if (prior.sigma_p2) {
    const Var centered = ndiff::add_scalar(spread, -prior.mu_p.value_or(0.0));
    total = ndiff::add(total, ndiff::scale(ndiff::sum(ndiff::square(centered)), 1.0 / (2.0 * *prior.sigma_p2)));
  }
  return total;
}

double hyperprior_penalty(const ModelParams& params, const PriorConfig& prior) {
  if (!params.variational()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    Tape tape;
    total += hyperprior_penalty(tape.constant(params.mean[k]), tape.constant(params.spread[k]), prior).value()(0, 0);
  }
  return total;
}

LossBreakdown contrastive_loss(const ViewPair& views, const WeightSet& weights, const ContrastiveConfig& config) {
  const Matrix h1 = project(encode(views.first.adjacency, views.first.features, weights), weights);
  const Matrix h2 = project(encode(views.second.adjacency, views.second.features, weights), weights);
  return nt_xent(h1, h2, config);
}

LossBreakdown total_loss(const ViewPair& views, const ModelParams& params, const ObjectiveConfig& config,
                         Rng& weight_rng, std::vector<Matrix>* gradients) {
  const bool variational_mode = config.mode != TrainingMode::infonce;
  if (variational_mode != params.variational()) {
    throw Error("mode " + to_string(config.mode) + " does not match the model kind");
  }
  if (config.samples < 1) throw Error("samples must be >= 1");
  const Index n = views.first.adjacency.size();
  const int samples = params.variational() ? config.samples : 1;

  std::vector<Matrix> flat_grads;
  if (gradients) {
    for (const auto& p : params.flatten()) flat_grads.push_back(Matrix::Zero(p.rows(), p.cols()));
  }

  LossBreakdown out;
  out.per_node = VectorXd::Zero(n);
  const double inv_samples = 1.0 / static_cast<double>(samples);
  for (int s = 0; s < samples; ++s) {
    WeightSample sample;
    if (params.variational()) sample = sample_weights(params, weight_rng);
    Tape tape;
    const auto tw = weights_on_tape(tape, params, params.variational() ? &sample.noise : nullptr);
    const Var h1 = project(encode(views.first.adjacency, views.first.features, tw.weights), tw.weights);
    const Var h2 = project(encode(views.second.adjacency, views.second.features, tw.weights), tw.weights);
    const auto contrast = nt_xent(h1, h2, config.contrastive);
    out.per_node += inv_samples * contrast.per_node;
    if (!gradients) continue;
    tape.backward(contrast.loss);
    for (std::size_t k = 0; k < kTensorCount; ++k) {
      flat_grads[k] += inv_samples * tw.mean[k].grad();
      if (params.variational()) flat_grads[kTensorCount + k] += inv_samples * tw.spread[k].grad();
    }
  }
  out.infonce = out.per_node.mean();

  if (params.variational()) {
    const double kl_weight = config.prior.kl_weight(n);
    const bool use_hyperprior = config.mode == TrainingMode::vgcl && config.prior.has_hyperprior();
    const double hp_weight = use_hyperprior ? config.prior.hp_weight(n) : 0.0;
    for (std::size_t k = 0; k < kTensorCount; ++k) {
      Tape tape;
      const Var mean = tape.parameter(params.mean[k]);
      const Var spread = tape.parameter(params.spread[k]);
      const Var kl = kl_gaussian(mean, spread, config.prior.sigma2);
      Var penalty = ndiff::scale(kl, kl_weight);
      out.kl += kl.value()(0, 0);
      if (use_hyperprior) {
        const Var hp = hyperprior_penalty(mean, spread, config.prior);
        out.hyperprior += hp.value()(0, 0);
        penalty = ndiff::add(penalty, ndiff::scale(hp, hp_weight));
      }
      if (!gradients) continue;
      tape.backward(penalty);
      flat_grads[k] += mean.grad();
      flat_grads[kTensorCount + k] += spread.grad();
    }
    out.total = out.infonce + kl_weight * out.kl + hp_weight * out.hyperprior;
  } else {
    out.total = out.infonce;
  }
  if (gradients) *gradients = std::move(flat_grads);
  return out;
}

}  // namespace vgcl
