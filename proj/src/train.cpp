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

#include "vgcl/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "vgcl/augment.hpp"
#include "vgcl/objective.hpp"
#include "vgcl/tensor_file.hpp"
#include "vgcl/text_io.hpp"

namespace vgcl {

namespace {

using nlohmann::json;

json optional_number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

std::string tensor_name(const ModelParams& params, std::size_t k, bool spread) {
  const std::string base(kTensorNames[k]);
  if (!params.variational()) return base;
  return (spread ? "spread/" : "mean/") + base;
}

json log_to_json(const TrainLog& log) {
  json rows = json::array();
  for (const auto& r : log.epochs) {
    rows.push_back({r.epoch, r.infonce, r.kl, r.hyperprior, r.total, r.is_best, r.seconds});
  }
  return rows;
}

TrainLog log_from_json(const json& rows) {
  TrainLog log;
  for (const auto& row : rows) {
    EpochRecord r;
    r.epoch = row.at(0).get<int>();
    r.infonce = row.at(1).get<double>();
    r.kl = row.at(2).get<double>();
    r.hyperprior = row.at(3).get<double>();
    r.total = row.at(4).get<double>();
    r.is_best = row.at(5).get<bool>();
    r.seconds = row.at(6).get<double>();
    if (r.is_best) log.best_epoch = r.epoch;
    log.epochs.push_back(r);
  }
  return log;
}

void check_finite(double value, int epoch, const char* component) {
  if (!std::isfinite(value)) {
    throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite " + component + " loss");
  }
}

TrainState initial_state(const Graph& graph, const TrainConfig& config) {
  TrainState state;
  EncoderConfig encoder = config.encoder;
  encoder.in_dim = graph.num_features();
  Rng init_rng(config.seed, "init");
  state.params = init_params(encoder, init_rng, config.model_kind(), config.init_sigma);
  state.optimizer.lr = config.lr;
  state.augment_rng = Rng(config.seed, "augment");
  state.weight_rng = Rng(config.seed, "weights");
  return state;
}

void write_outputs(const std::filesystem::path& out_dir, const TrainResult& result) {
  if (out_dir.empty()) return;
  save_checkpoint(result.last, out_dir / "last");
  text::write_file(out_dir / "trainlog.csv", trainlog_csv(result.log));
}

TrainResult run_epochs(const Graph& graph, const TrainConfig& config, TrainState state,
                       const std::filesystem::path& out_dir, std::optional<Checkpoint> best) {
  config.validate();
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  const std::string hash = config_hash(config);
  const ObjectiveConfig objective = config.objective();
  state.optimizer.lr = config.lr;

  std::vector<Matrix> grads;
  for (int epoch = state.epoch; epoch < config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    Checkpoint snapshot{state, std::nullopt, hash, config, graph.name};

    const ViewPair views = make_views(graph, config.augment, state.augment_rng);
    const LossBreakdown loss = total_loss(views, state.params, objective, state.weight_rng, &grads);
    check_finite(loss.infonce, epoch, "infonce");
    check_finite(loss.kl, epoch, "kl");
    check_finite(loss.hyperprior, epoch, "hyperprior");
    check_finite(loss.total, epoch, "total");
    for (const auto& g : grads) {
      if (!g.allFinite()) throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite gradient");
    }

    EpochRecord record{epoch, loss.infonce, loss.kl, loss.hyperprior, loss.total, false, 0.0};
    if (loss.infonce < state.best_infonce) {
      record.is_best = true;
      snapshot.loss = loss.infonce;
      if (!out_dir.empty()) save_checkpoint(snapshot, out_dir);
      best = std::move(snapshot);
      state.best_infonce = loss.infonce;
      state.log.best_epoch = epoch;
    }

    std::vector<Matrix> flat = state.params.flatten();
    ndiff::adam_step<double>(flat, grads, state.optimizer);
    state.params.unflatten(flat);

    if (!config.strict_deterministic) {
      record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    state.log.epochs.push_back(record);
    state.epoch = epoch + 1;
  }

  TrainResult result;
  result.log = state.log;
  result.last = Checkpoint{std::move(state), std::nullopt, hash, config, graph.name};
  if (best) {
    result.best = std::move(*best);
  } else if (!out_dir.empty() && std::filesystem::exists(out_dir / "checkpoint.json")) {
    result.best = load_checkpoint(out_dir);
  } else {
    result.best = result.last;
  }
  write_outputs(out_dir, result);
  return result;
}

}  // namespace

std::string trainlog_csv(const TrainLog& log) {
  std::string out = "epoch,infonce,kl,hyperprior,total,is_best,seconds\n";
  for (const auto& r : log.epochs) {
    out += std::to_string(r.epoch) + ',' + text::format_double(r.infonce) + ',' + text::format_double(r.kl) + ',' +
           text::format_double(r.hyperprior) + ',' + text::format_double(r.total) + ',' + (r.is_best ? "1" : "0") +
           ',' + text::format_fixed(r.seconds, 3) + '\n';
  }
  return out;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const TrainState& state = checkpoint.state;
  const ModelParams& params = state.params;

  std::vector<NamedTensor> tensors;
  for (std::size_t k = 0; k < kTensorCount; ++k) tensors.push_back({tensor_name(params, k, false), params.mean[k]});
  if (params.variational()) {
    for (std::size_t k = 0; k < kTensorCount; ++k) tensors.push_back({tensor_name(params, k, true), params.spread[k]});
  }
  for (std::size_t i = 0; i < state.optimizer.first_moment.size(); ++i) {
    tensors.push_back({"adam/m/" + std::to_string(i), state.optimizer.first_moment[i]});
    tensors.push_back({"adam/v/" + std::to_string(i), state.optimizer.second_moment[i]});
  }
  write_tensors(dir / "weights.bin", tensors);

  const auto& enc = params.config;
  json doc = {
      {"format", "vgcl-checkpoint-1"},
      {"epoch", state.epoch},
      {"loss", checkpoint.loss ? json(*checkpoint.loss) : json(nullptr)},
      {"mode", to_string(checkpoint.config.mode)},
      {"config_hash", checkpoint.config_hash},
      {"dataset", checkpoint.dataset},
      {"config", to_json(checkpoint.config)},
      {"encoder", {{"in_dim", enc.in_dim}, {"hidden", enc.hidden}, {"out", enc.out}, {"proj_hidden", enc.proj_hidden}}},
      {"optimizer",
       {{"step", state.optimizer.step},
        {"lr", state.optimizer.lr},
        {"beta1", state.optimizer.beta1},
        {"beta2", state.optimizer.beta2},
        {"eps", state.optimizer.eps}}},
      {"rng", {{"augment", state.augment_rng.state()}, {"weights", state.weight_rng.state()}}},
      {"best_infonce", optional_number(state.best_infonce)},
      {"best_epoch", state.log.best_epoch},
      {"log", log_to_json(state.log)},
  };
  text::write_file(dir / "checkpoint.json", doc.dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto json_path = dir / "checkpoint.json";
  if (!std::filesystem::exists(json_path)) throw Error("no checkpoint found at " + dir.string());
  json doc;
  try {
    doc = json::parse(text::read_file(json_path));
  } catch (const json::exception& e) {
    throw Error(json_path.string() + ": " + e.what());
  }
  try {
    Checkpoint checkpoint;
    checkpoint.config = parse_train_config(doc.at("config"));
    checkpoint.config_hash = doc.at("config_hash").get<std::string>();
    checkpoint.dataset = doc.value("dataset", std::string{});
    if (!doc.at("loss").is_null()) checkpoint.loss = doc.at("loss").get<double>();

    TrainState& state = checkpoint.state;
    state.epoch = doc.at("epoch").get<int>();
    const auto& best = doc.at("best_infonce");
    state.best_infonce = best.is_null() ? std::numeric_limits<double>::infinity() : best.get<double>();
    state.log = log_from_json(doc.at("log"));
    state.log.best_epoch = doc.at("best_epoch").get<int>();
    state.augment_rng.restore(doc.at("rng").at("augment").get<std::string>());
    state.weight_rng.restore(doc.at("rng").at("weights").get<std::string>());
    const auto& opt = doc.at("optimizer");
    state.optimizer.step = opt.at("step").get<std::int64_t>();
    state.optimizer.lr = opt.at("lr").get<double>();
    state.optimizer.beta1 = opt.at("beta1").get<double>();
    state.optimizer.beta2 = opt.at("beta2").get<double>();
    state.optimizer.eps = opt.at("eps").get<double>();

    ModelParams& params = state.params;
    params.kind = checkpoint.config.model_kind();
    const auto& enc = doc.at("encoder");
    params.config.in_dim = enc.at("in_dim").get<Index>();
    params.config.hidden = enc.at("hidden").get<Index>();
    params.config.out = enc.at("out").get<Index>();
    params.config.proj_hidden = enc.at("proj_hidden").get<Index>();

    std::map<std::string, Matrix> tensors;
    for (auto& t : read_tensors(dir / "weights.bin")) tensors.emplace(std::move(t.name), std::move(t.value));
    auto take = [&](const std::string& name, Index rows, Index cols) {
      const auto it = tensors.find(name);
      if (it == tensors.end()) throw Error(dir.string() + ": weights.bin lacks tensor '" + name + "'");
      if (it->second.rows() != rows || it->second.cols() != cols) {
        throw Error(dir.string() + ": tensor '" + name + "' has the wrong shape");
      }
      return it->second;
    };
    const auto shapes = params.config.shapes();
    for (std::size_t k = 0; k < kTensorCount; ++k) {
      params.mean[k] = take(tensor_name(params, k, false), shapes[k].first, shapes[k].second);
      if (params.variational()) params.spread[k] = take(tensor_name(params, k, true), shapes[k].first, shapes[k].second);
    }
    if (state.optimizer.step > 0) {
      const auto flat = params.flatten();
      for (std::size_t i = 0; i < flat.size(); ++i) {
        state.optimizer.first_moment.push_back(take("adam/m/" + std::to_string(i), flat[i].rows(), flat[i].cols()));
        state.optimizer.second_moment.push_back(take("adam/v/" + std::to_string(i), flat[i].rows(), flat[i].cols()));
      }
    }
    return checkpoint;
  } catch (const json::exception& e) {
    throw Error(json_path.string() + ": " + e.what());
  }
}

TrainResult train(const Graph& graph, const TrainConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  return run_epochs(graph, config, initial_state(graph, config), out_dir, std::nullopt);
}

TrainResult resume(const Graph& graph, const TrainConfig& config, const std::filesystem::path& checkpoint_dir,
                   const std::filesystem::path& out_dir) {
  config.validate();
  Checkpoint checkpoint = load_checkpoint(checkpoint_dir);
  const std::string hash = config_hash(config);
  if (checkpoint.config_hash != hash) {
    throw Error("checkpoint config hash " + checkpoint.config_hash + " does not match the current config (" + hash +
                "); resume needs identical training settings");
  }
  if (checkpoint.state.params.config.in_dim != graph.num_features()) {
    throw Error("checkpoint feature dimension differs from the dataset");
  }
  std::filesystem::path target = out_dir;
  if (target.empty() && checkpoint_dir.filename() == "last") target = checkpoint_dir.parent_path();
  return run_epochs(graph, config, std::move(checkpoint.state), target, std::nullopt);
}

}  // namespace vgcl
