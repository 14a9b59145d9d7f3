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

#include "vgcl/uncertainty.hpp"

#include <algorithm>
#include <numeric>

#include "vgcl/text_io.hpp"

namespace vgcl {

std::string to_string(Orientation orientation) {
  return orientation == Orientation::higher_is_certain ? "higher_is_certain" : "higher_is_uncertain";
}

Orientation orientation_from_string(const std::string& text) {
  if (text == "higher_is_certain" || text == "certain") return Orientation::higher_is_certain;
  if (text == "higher_is_uncertain" || text == "uncertain") return Orientation::higher_is_uncertain;
  throw Error("unknown orientation '" + text + "'");
}

std::string to_string(VariationSource source) {
  switch (source) {
    case VariationSource::none: return "none";
    case VariationSource::augmentations: return "augmentations";
    case VariationSource::weights: return "weights";
    case VariationSource::both: return "both";
  }
  return "none";
}

DrawSet collect_draws(const ModelParams& params, const Graph& graph, const AugmentConfig& augment,
                      const ContrastiveConfig& contrastive, int draws, Rng& augment_rng, Rng& weight_rng) {
  if (draws < 2) throw Error("at least 2 draws are needed to measure spread across draws");
  const Index n = graph.num_nodes();
  const bool variational = params.variational();
  const GraphView whole = identity_view(graph);

  DrawSet out;
  out.likelihood.values.resize(draws, n);
  out.weight_embeddings.source = variational ? VariationSource::weights : VariationSource::none;
  out.view_embeddings.source = variational ? VariationSource::both : VariationSource::augmentations;
  for (int j = 0; j < draws; ++j) {
    out.likelihood.augment_draw_ids.push_back(augment_rng.draws());
    const ViewPair views = make_views(graph, augment, augment_rng);
    out.likelihood.weight_draw_ids.push_back(weight_rng.draws());
    const WeightSample sample = sample_weights(params, weight_rng);

    const LossBreakdown loss = contrastive_loss(views, sample.weights, contrastive);
    for (Index i = 0; i < n; ++i) out.likelihood.values(j, i) = std::exp(-loss.per_node[i]);
    if (variational) out.weight_embeddings.draws.push_back(encode(whole.adjacency, whole.features, sample.weights));
    out.view_embeddings.draws.push_back(encode(views.first.adjacency, views.first.features, sample.weights));
  }
  if (!out.likelihood.values.allFinite() || (out.likelihood.values.array() <= 0.0).any()) {
    throw NumericalError("likelihood proxies must be positive and finite");
  }
  return out;
}

ScoreVector cmds(const LikelihoodMatrix& likelihood) {
  return {"cmds", cmds_kernel(likelihood.values), Orientation::higher_is_certain};
}

ScoreVector expected_likelihood(const LikelihoodMatrix& likelihood) {
  return {"likelihood", likelihood.values.colwise().mean().transpose(), Orientation::higher_is_certain};
}

ScoreVector waic(const LikelihoodMatrix& likelihood) {
  const Matrix logs = likelihood.values.array().log().matrix();
  const Eigen::RowVectorXd mean_log = logs.colwise().mean();
  const Eigen::RowVectorXd var_log = (logs.rowwise() - mean_log).array().square().colwise().mean();
  return {"waic", (likelihood.values.colwise().mean() - var_log).transpose(), Orientation::higher_is_certain};
}

namespace {

void require_weights(const EmbeddingSamples& samples) {
  if (samples.source != VariationSource::weights && samples.source != VariationSource::both) {
    throw Error("astd is not applicable to a deterministic encoder: its embeddings do not vary across weight draws");
  }
}

}  // namespace

ScoreVector astd(const EmbeddingSamples& samples) {
  require_weights(samples);
  return {"astd", feature_spread(samples.draws, [](double v) { return std::sqrt(v); }),
          Orientation::higher_is_uncertain};
}

ScoreVector astd_norm(const EmbeddingSamples& samples) {
  require_weights(samples);
  std::vector<Matrix> normalized;
  normalized.reserve(samples.draws.size());
  for (const Matrix& d : samples.draws) {
    Matrix scaled = Matrix::Zero(d.rows(), d.cols());
    for (Index c = 0; c < d.cols(); ++c) {
      const double lo = d.col(c).minCoeff();
      const double range = d.col(c).maxCoeff() - lo;
      if (range > 0.0) scaled.col(c) = (d.col(c).array() - lo) / range;
    }
    normalized.push_back(std::move(scaled));
  }
  return {"astd_norm", feature_spread(normalized, [](double v) { return std::sqrt(v); }),
          Orientation::higher_is_uncertain};
}

ScoreVector psfv(const EmbeddingSamples& samples) {
  if (samples.source != VariationSource::augmentations && samples.source != VariationSource::both) {
    throw Error("psfv needs embeddings that vary across augmentations");
  }
  return {"psfv", feature_spread(samples.draws, [](double v) { return v; }), Orientation::higher_is_uncertain};
}

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names{"cmds", "astd", "astd_norm", "psfv", "likelihood", "waic"};
  return names;
}

ScoreVector score(const DrawSet& draws, const std::string& measure) {
  if (measure == "cmds") return cmds(draws.likelihood);
  if (measure == "astd") return astd(draws.weight_embeddings);
  if (measure == "astd_norm") return astd_norm(draws.weight_embeddings);
  if (measure == "psfv") return psfv(draws.view_embeddings);
  if (measure == "likelihood") return expected_likelihood(draws.likelihood);
  if (measure == "waic") return waic(draws.likelihood);
  throw Error("unknown measure '" + measure + "'");
}

std::vector<ScoreVector> all_scores(const DrawSet& draws) {
  const bool has_weights = draws.weight_embeddings.source == VariationSource::weights ||
                           draws.weight_embeddings.source == VariationSource::both;
  std::vector<ScoreVector> out;
  for (const auto& name : measure_names()) {
    if (!has_weights && (name == "astd" || name == "astd_norm")) continue;
    out.push_back(score(draws, name));
  }
  return out;
}

RetentionCurve retention_curve(const VectorXd& scores, Orientation orientation, const std::vector<Index>& test_nodes,
                               const std::vector<std::uint8_t>& correct) {
  if (test_nodes.empty()) throw Error("retention curve needs a non-empty test set");
  if (test_nodes.size() != correct.size()) throw Error("retention: test nodes and correctness flags differ in length");
  std::vector<std::size_t> order(test_nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const Index node : test_nodes) {
    if (node < 0 || node >= scores.size()) throw Error("retention: test node " + std::to_string(node) + " has no score");
  }
  const bool ascending = orientation == Orientation::higher_is_uncertain;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores[test_nodes[a]];
    const double sb = scores[test_nodes[b]];
    if (sa != sb) return ascending ? sa < sb : sa > sb;
    return test_nodes[a] < test_nodes[b];
  });
  RetentionCurve curve;
  curve.reserve(order.size());
  const double total = static_cast<double>(order.size());
  Index hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    hits += correct[order[k]] ? 1 : 0;
    curve.push_back({static_cast<double>(k + 1) / total, static_cast<double>(hits) / static_cast<double>(k + 1)});
  }
  return curve;
}

double retention_area(const RetentionCurve& curve) {
  if (curve.empty()) throw Error("retention area of an empty curve");
  double sum = 0.0;
  for (const auto& p : curve) sum += p.accuracy;
  return sum / static_cast<double>(curve.size());
}

double retention_at(const RetentionCurve& curve, double fraction) {
  if (curve.empty()) throw Error("retention of an empty curve");
  const double wanted = std::ceil(fraction * static_cast<double>(curve.size()) - 1e-9);
  const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(wanted, 1.0)), 1, curve.size());
  return curve[k - 1].accuracy;
}

double random_retention_area(const std::vector<std::uint8_t>& correct, int count, Rng& rng) {
  if (correct.empty()) throw Error("retention curve needs a non-empty test set");
  if (count < 1) throw Error("random_retention_area: count must be >= 1");
  std::vector<std::uint8_t> shuffled = correct;
  double total = 0.0;
  for (int r = 0; r < count; ++r) {
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
    }
    double hits = 0.0;
    double area = 0.0;
    for (std::size_t k = 0; k < shuffled.size(); ++k) {
      hits += shuffled[k];
      area += hits / static_cast<double>(k + 1);
    }
    total += area / static_cast<double>(shuffled.size());
  }
  return total / count;
}

std::string scores_tsv(const std::vector<ScoreVector>& scores) {
  if (scores.empty()) throw Error("no scores to write");
  std::string out = "# orientation";
  for (const auto& s : scores) out += " " + s.measure + "=" + to_string(s.orientation);
  out += "\nnode";
  for (const auto& s : scores) out += "\t" + s.measure;
  out += "\n";
  const Index n = scores.front().values.size();
  for (Index i = 0; i < n; ++i) {
    out += std::to_string(i);
    for (const auto& s : scores) out += "\t" + text::format_double(s.values[i]);
    out += "\n";
  }
  return out;
}

std::vector<ScoreVector> parse_scores_tsv(const std::string& path) {
  text::LineReader reader(path);
  std::string_view line;
  if (!reader.next(line) || line.substr(0, 1) != "#") reader.fail("expected an '# orientation' comment line");
  const auto comment = text::split(line.substr(1));
  if (comment.empty() || comment[0] != "orientation") reader.fail("expected an '# orientation' comment line");

  if (!reader.next(line)) reader.fail("missing header line");
  const auto header = text::split(line);
  if (header.size() < 2 || header[0] != "node") reader.fail("header must start with 'node'");
  std::vector<ScoreVector> scores(header.size() - 1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    scores[c - 1].measure = std::string(header[c]);
    bool found = false;
    for (std::size_t k = 1; k < comment.size(); ++k) {
      const auto eq = comment[k].find('=');
      if (eq == std::string_view::npos) reader.fail("malformed orientation entry '" + std::string(comment[k]) + "'");
      if (comment[k].substr(0, eq) == header[c]) {
        scores[c - 1].orientation = orientation_from_string(std::string(comment[k].substr(eq + 1)));
        found = true;
      }
    }
    if (!found) reader.fail("no orientation recorded for measure '" + scores[c - 1].measure + "'");
  }

  std::vector<std::vector<double>> columns(scores.size());
  Index expected = 0;
  while (reader.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line);
    if (fields.size() != header.size()) reader.fail("expected " + std::to_string(header.size()) + " fields");
    if (reader.parse<Index>(fields[0]) != expected) reader.fail("node indices must be 0, 1, 2, ...");
    ++expected;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const double v = reader.parse<double>(fields[c]);
      if (!std::isfinite(v)) reader.fail("non-finite score");
      columns[c - 1].push_back(v);
    }
  }
  for (std::size_t c = 0; c < scores.size(); ++c) {
    scores[c].values = Eigen::Map<const VectorXd>(columns[c].data(), static_cast<Index>(columns[c].size()));
  }
  return scores;
}

std::string retention_csv(const RetentionCurve& curve) {
  std::string out = "fraction,accuracy\n";
  for (const auto& p : curve) out += text::format_fixed(p.fraction, 6) + "," + text::format_fixed(p.accuracy, 6) + "\n";
  return out;
}

}  // namespace vgcl
