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

#include "vgcl/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "vgcl/random.hpp"

namespace vgcl {

namespace {

using nlohmann::json;

/// Reads typed fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw Error(where() + " must be a JSON object");
  }

  template <typename T>
  std::optional<T> optional(const std::string& key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return std::nullopt;
    return convert<T>(*it, key);
  }

  template <typename T>
  T value(const std::string& key, T fallback) {
    return optional<T>(key).value_or(fallback);
  }

  template <typename T>
  T required(const std::string& key) {
    auto v = optional<T>(key);
    if (!v) throw Error("config: missing required key " + qualified(key));
    return *v;
  }

  const json* object(const std::string& key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  void skip(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [key, unused] : object_.items()) {
      if (!seen_.count(key)) throw Error("config: unknown key " + qualified(key));
    }
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  template <typename T>
  T convert(const json& v, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw Error("config: " + qualified(key) + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw Error("config: " + qualified(key) + " must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          throw Error("config: " + qualified(key) + " must be nonnegative");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw Error("config: " + qualified(key) + " must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw Error("config: " + qualified(key) + " must be a string");
    }
    return v.get<T>();
  }

  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

FeatureMasking masking_from_string(const std::string& text) {
  if (text == "column") return FeatureMasking::column;
  if (text == "entry") return FeatureMasking::entry;
  throw Error("config: augment.feature_masking must be \"column\" or \"entry\"");
}

Negatives negatives_from_string(const std::string& text) {
  if (text == "inter_intra") return Negatives::inter_and_intra;
  if (text == "inter") return Negatives::inter_only;
  throw Error("config: contrastive.negatives must be \"inter_intra\" or \"inter\"");
}

void parse_train_fields(ObjectReader& top, TrainConfig& cfg) {
  cfg.mode = training_mode_from_string(top.value<std::string>("mode", to_string(cfg.mode)));
  cfg.epochs = top.value<int>("epochs", cfg.epochs);
  cfg.lr = top.value<double>("lr", cfg.lr);
  cfg.samples = top.value<int>("samples", cfg.samples);
  cfg.seed = top.value<std::uint64_t>("seed", cfg.seed);
  cfg.strict_deterministic = top.value<bool>("strict_deterministic", cfg.strict_deterministic);
  cfg.init_sigma = top.value<double>("init_sigma", cfg.init_sigma);

  if (const json* node = top.object("augment")) {
    ObjectReader r(*node, "augment");
    cfg.augment.p_f1 = r.value<double>("p_f1", cfg.augment.p_f1);
    cfg.augment.p_f2 = r.value<double>("p_f2", cfg.augment.p_f2);
    cfg.augment.p_e1 = r.value<double>("p_e1", cfg.augment.p_e1);
    cfg.augment.p_e2 = r.value<double>("p_e2", cfg.augment.p_e2);
    if (auto m = r.optional<std::string>("feature_masking")) cfg.augment.masking = masking_from_string(*m);
    r.finish();
  }
  if (const json* node = top.object("prior")) {
    ObjectReader r(*node, "prior");
    cfg.prior.sigma2 = r.value<double>("sigma2", cfg.prior.sigma2);
    cfg.prior.sigma0 = r.optional<double>("sigma0");
    const auto mu_p2 = r.optional<double>("mu_p2");
    const auto mu_p_raw = r.optional<double>("mu_p_raw");
    if (mu_p2 && mu_p_raw) throw Error("config: prior.mu_p2 and prior.mu_p_raw are mutually exclusive");
    if (mu_p2) {
      if (*mu_p2 < 0) throw Error("config: prior.mu_p2 must be nonnegative");
      cfg.prior.mu_p = std::sqrt(*mu_p2);
    } else {
      cfg.prior.mu_p = mu_p_raw;
    }
    cfg.prior.sigma_p2 = r.optional<double>("sigma_p2");
    cfg.prior.kl_scale = r.optional<double>("kl_scale");
    cfg.prior.hp_scale = r.optional<double>("hp_scale");
    r.finish();
  }
  if (const json* node = top.object("contrastive")) {
    ObjectReader r(*node, "contrastive");
    cfg.contrastive.tau = r.value<double>("tau", cfg.contrastive.tau);
    if (auto neg = r.optional<std::string>("negatives")) cfg.contrastive.negatives = negatives_from_string(*neg);
    cfg.contrastive.block_rows = r.value<Index>("block_rows", cfg.contrastive.block_rows);
    cfg.contrastive.dense_limit = r.value<Index>("dense_limit", cfg.contrastive.dense_limit);
    r.finish();
  }
  if (const json* node = top.object("model")) {
    ObjectReader r(*node, "model");
    cfg.encoder.hidden = r.value<Index>("hidden", cfg.encoder.hidden);
    cfg.encoder.out = r.value<Index>("out", cfg.encoder.out);
    cfg.encoder.proj_hidden = r.value<Index>("proj_hidden", cfg.encoder.proj_hidden);
    r.finish();
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw Error("config: epochs must be >= 1");
  if (!(lr >= 0) || !std::isfinite(lr)) throw Error("config: lr must be a finite nonnegative number");
  if (samples < 1) throw Error("config: samples must be >= 1");
  if (mode != TrainingMode::vgcl && prior.has_hyperprior()) {
    throw Error("config: hyperprior settings (sigma0, sigma_p2) require mode vgcl");
  }
  if (mode == TrainingMode::vgcl && !prior.has_hyperprior()) {
    throw Error("config: mode vgcl needs at least one hyperprior (sigma0 or sigma_p2)");
  }
  if (!(init_sigma > 0)) throw Error("config: init_sigma must be positive");
  augment.validate();
  prior.validate();
  contrastive.validate();
  if (encoder.hidden < 1 || encoder.out < 1 || encoder.proj_hidden < 1) throw Error("config: model sizes must be >= 1");
}

ObjectiveConfig TrainConfig::objective() const {
  ObjectiveConfig out;
  out.mode = mode;
  out.contrastive = contrastive;
  out.prior = prior;
  out.samples = mode == TrainingMode::infonce ? 1 : samples;
  return out;
}

void RunConfig::validate() const {
  train.validate();
  if (eval.runs < 1) throw Error("config: eval.runs must be >= 1");
  if (eval.samples < 1) throw Error("config: eval.samples must be >= 1");
  if (uncertainty.draws < 2) throw Error("config: uncertainty.draws must be >= 2");
}

TrainConfig parse_train_config(const nlohmann::json& doc) {
  TrainConfig cfg;
  ObjectReader top(doc, "");
  parse_train_fields(top, cfg);
  top.finish();
  cfg.validate();
  return cfg;
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  RunConfig cfg;
  ObjectReader top(doc, "");
  cfg.dataset = top.value<std::string>("dataset", "");
  parse_train_fields(top, cfg.train);
  if (const json* node = top.object("eval")) {
    ObjectReader r(*node, "eval");
    cfg.eval.runs = r.value<int>("runs", cfg.eval.runs);
    cfg.eval.samples = r.value<int>("samples", cfg.eval.samples);
    cfg.eval.standardize = r.value<bool>("standardize", cfg.eval.standardize);
    r.finish();
  }
  if (const json* node = top.object("uncertainty")) {
    ObjectReader r(*node, "uncertainty");
    cfg.uncertainty.draws = r.value<int>("draws", cfg.uncertainty.draws);
    r.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  try {
    return parse_run_config(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const TrainConfig& cfg) {
  json prior = {{"sigma2", cfg.prior.sigma2}};
  if (cfg.prior.sigma0) prior["sigma0"] = *cfg.prior.sigma0;
  if (cfg.prior.mu_p) prior["mu_p_raw"] = *cfg.prior.mu_p;
  if (cfg.prior.sigma_p2) prior["sigma_p2"] = *cfg.prior.sigma_p2;
  if (cfg.prior.kl_scale) prior["kl_scale"] = *cfg.prior.kl_scale;
  if (cfg.prior.hp_scale) prior["hp_scale"] = *cfg.prior.hp_scale;
  return json{
      {"mode", to_string(cfg.mode)},
      {"epochs", cfg.epochs},
      {"lr", cfg.lr},
      {"samples", cfg.samples},
      {"seed", cfg.seed},
      {"strict_deterministic", cfg.strict_deterministic},
      {"init_sigma", cfg.init_sigma},
      {"augment",
       {{"p_f1", cfg.augment.p_f1},
        {"p_f2", cfg.augment.p_f2},
        {"p_e1", cfg.augment.p_e1},
        {"p_e2", cfg.augment.p_e2},
        {"feature_masking", cfg.augment.masking == FeatureMasking::column ? "column" : "entry"}}},
      {"prior", prior},
      {"contrastive",
       {{"tau", cfg.contrastive.tau},
        {"negatives", cfg.contrastive.negatives == Negatives::inter_and_intra ? "inter_intra" : "inter"},
        {"block_rows", cfg.contrastive.block_rows},
        {"dense_limit", cfg.contrastive.dense_limit}}},
      {"model",
       {{"hidden", cfg.encoder.hidden}, {"out", cfg.encoder.out}, {"proj_hidden", cfg.encoder.proj_hidden}}},
  };
}

nlohmann::json to_json(const RunConfig& cfg) {
  json doc = to_json(cfg.train);
  doc["dataset"] = cfg.dataset;
  doc["eval"] = {{"runs", cfg.eval.runs}, {"samples", cfg.eval.samples}, {"standardize", cfg.eval.standardize}};
  doc["uncertainty"] = {{"draws", cfg.uncertainty.draws}};
  return doc;
}

std::string config_hash(const TrainConfig& cfg) {
  json doc = to_json(cfg);
  doc.erase("epochs");
  doc.erase("strict_deterministic");
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << fnv1a(doc.dump());
  return out.str();
}

}  // namespace vgcl
