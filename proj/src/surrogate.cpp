// Copyright 2026 The eonkit authors
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

#include "eonkit/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "eonkit/dsp.hpp"
#include "eonkit/errors.hpp"
#include "eonkit/rng.hpp"

namespace eonkit {
namespace oracles {

namespace {

// Box-Muller on top of the project Rng so initialization replays exactly.
double normal_draw(Rng& rng) {
  double u1 = rng.next_double();
  while (u1 <= 0.0) u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::vector<double> standardized(const SurrogateModel& model,
                                 const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = (raw[i] - model.feature_mean[i]) / model.feature_std[i];
  }
  return out;
}

}  // namespace

std::vector<double> forward_logits(const SurrogateModel& model,
                                   const std::vector<double>& features) {
  if (model.layer_sizes.empty() ||
      features.size() != static_cast<std::size_t>(model.layer_sizes.front())) {
    throw OracleError("surrogate: feature vector width mismatch");
  }
  std::vector<double> act = features;
  for (std::size_t l = 0; l < model.n_layers(); ++l) {
    const int in = model.layer_sizes[l];
    const int out = model.layer_sizes[l + 1];
    std::vector<double> next(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double acc = model.biases[l][static_cast<std::size_t>(o)];
      const double* row =
          model.weights[l].data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * act[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(o)] = acc;
    }
    if (l + 1 < model.n_layers()) {
      for (auto& v : next) v = std::max(0.0, v);
    }
    act = std::move(next);
  }
  return act;
}

ClassScores softmax_scores(const std::vector<std::string>& labels,
                           const std::vector<double>& logits) {
  if (labels.size() != logits.size() || labels.empty()) {
    throw OracleError("softmax: label/logit width mismatch");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  std::vector<double> ex(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    ex[i] = std::exp(logits[i] - mx);
    denom += ex[i];
  }
  ClassScores scores;
  scores.labels = labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = ex[i] / denom;
    if (!std::isfinite(p)) throw OracleError("softmax: non-finite probability");
    scores.scores[labels[i]] = p;
  }
  return scores;
}

void cross_entropy_gradients(const SurrogateModel& model,
                             const std::vector<std::vector<double>>& features,
                             const std::vector<int>& label_indices,
                             std::vector<std::vector<double>>* weight_grads,
                             std::vector<std::vector<double>>* bias_grads,
                             double* loss) {
  const std::size_t n_layers = model.n_layers();
  weight_grads->assign(n_layers, {});
  bias_grads->assign(n_layers, {});
  for (std::size_t l = 0; l < n_layers; ++l) {
    (*weight_grads)[l].assign(model.weights[l].size(), 0.0);
    (*bias_grads)[l].assign(model.biases[l].size(), 0.0);
  }
  double total_loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(features.size());

  for (std::size_t s = 0; s < features.size(); ++s) {
    // Forward pass keeping every activation for the backward sweep.
    std::vector<std::vector<double>> acts(n_layers + 1);
    acts[0] = features[s];
    for (std::size_t l = 0; l < n_layers; ++l) {
      const int in = model.layer_sizes[l];
      const int out = model.layer_sizes[l + 1];
      acts[l + 1].assign(static_cast<std::size_t>(out), 0.0);
      for (int o = 0; o < out; ++o) {
        double acc = model.biases[l][static_cast<std::size_t>(o)];
        const double* row =
            model.weights[l].data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          acc += row[i] * acts[l][static_cast<std::size_t>(i)];
        }
        if (l + 1 < n_layers) acc = std::max(0.0, acc);
        acts[l + 1][static_cast<std::size_t>(o)] = acc;
      }
    }

    const auto& logits = acts[n_layers];
    const double mx = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    std::vector<double> prob(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
      prob[i] = std::exp(logits[i] - mx);
      denom += prob[i];
    }
    for (auto& p : prob) p /= denom;
    const int y = label_indices[s];
    total_loss -= std::log(std::max(prob[static_cast<std::size_t>(y)], 1e-300));

    std::vector<double> delta = prob;
    delta[static_cast<std::size_t>(y)] -= 1.0;
    for (auto& d : delta) d *= inv_b;

    for (std::size_t l = n_layers; l-- > 0;) {
      const int in = model.layer_sizes[l];
      const int out = model.layer_sizes[l + 1];
      std::vector<double> prev_delta(static_cast<std::size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        (*bias_grads)[l][static_cast<std::size_t>(o)] += d;
        double* grow =
            (*weight_grads)[l].data() + static_cast<std::size_t>(o) * in;
        const double* wrow =
            model.weights[l].data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          grow[i] += d * acts[l][static_cast<std::size_t>(i)];
          prev_delta[static_cast<std::size_t>(i)] += d * wrow[i];
        }
      }
      if (l > 0) {
        // ReLU derivative gates on the post-activation value.
        for (int i = 0; i < in; ++i) {
          if (acts[l][static_cast<std::size_t>(i)] <= 0.0) {
            prev_delta[static_cast<std::size_t>(i)] = 0.0;
          }
        }
      }
      delta = std::move(prev_delta);
    }
  }
  if (loss) *loss = total_loss * inv_b;
}

SurrogateModel train_surrogate(
    const std::vector<std::pair<audio::AudioClip, std::string>>& dataset,
    const TrainOptions& options, const FeatureConfig& features,
    std::vector<double>* loss_trace) {
  std::map<std::string, int> class_counts;
  for (const auto& [clip, label] : dataset) ++class_counts[label];
  if (class_counts.size() < 2) {
    throw DataError("train_surrogate: need at least 2 classes");
  }
  for (const auto& [label, count] : class_counts) {
    if (count < 4) {
      throw DataError("train_surrogate: class '" + label +
                      "' has fewer than 4 samples");
    }
  }

  SurrogateModel model;
  model.features = features;
  model.seed = options.seed;
  for (const auto& [label, count] : class_counts) model.labels.push_back(label);

  std::map<std::string, int> label_index;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    label_index[model.labels[i]] = static_cast<int>(i);
  }

  std::vector<std::vector<double>> feats(dataset.size());
  std::vector<int> targets(dataset.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    feats[s] = dsp::mean_mfcc(dataset[s].first, features.n_coeffs,
                              features.n_mels, features.window_s,
                              features.hop_s);
    targets[s] = label_index[dataset[s].second];
  }

  const std::size_t dim = feats.front().size();
  model.feature_mean.assign(dim, 0.0);
  model.feature_std.assign(dim, 0.0);
  for (const auto& f : feats) {
    for (std::size_t i = 0; i < dim; ++i) model.feature_mean[i] += f[i];
  }
  for (auto& m : model.feature_mean) m /= static_cast<double>(feats.size());
  for (const auto& f : feats) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = f[i] - model.feature_mean[i];
      model.feature_std[i] += d * d;
    }
  }
  for (auto& s : model.feature_std) {
    s = std::max(std::sqrt(s / static_cast<double>(feats.size())), 1e-8);
  }
  for (auto& f : feats) {
    for (std::size_t i = 0; i < dim; ++i) {
      f[i] = (f[i] - model.feature_mean[i]) / model.feature_std[i];
    }
  }

  model.layer_sizes.push_back(static_cast<int>(dim));
  for (int h : options.hidden_sizes) model.layer_sizes.push_back(h);
  model.layer_sizes.push_back(static_cast<int>(model.labels.size()));

  Rng rng(options.seed);
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    const int in = model.layer_sizes[l];
    const int out = model.layer_sizes[l + 1];
    const double scale = std::sqrt(2.0 / in);
    std::vector<double> w(static_cast<std::size_t>(in) * out);
    for (auto& v : w) v = normal_draw(rng) * scale;
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(static_cast<std::size_t>(out), 0.0);
  }

  std::vector<std::vector<double>> w_vel(model.n_layers());
  std::vector<std::vector<double>> b_vel(model.n_layers());
  for (std::size_t l = 0; l < model.n_layers(); ++l) {
    w_vel[l].assign(model.weights[l].size(), 0.0);
    b_vel[l].assign(model.biases[l].size(), 0.0);
  }

  if (loss_trace) loss_trace->clear();
  std::vector<std::vector<double>> w_grads;
  std::vector<std::vector<double>> b_grads;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    double loss = 0.0;
    cross_entropy_gradients(model, feats, targets, &w_grads, &b_grads, &loss);
    if (!std::isfinite(loss)) {
      throw DataError("train_surrogate: non-finite loss at epoch " +
                      std::to_string(epoch));
    }
    if (loss_trace) loss_trace->push_back(loss);
    for (std::size_t l = 0; l < model.n_layers(); ++l) {
      for (std::size_t i = 0; i < model.weights[l].size(); ++i) {
        w_vel[l][i] = options.momentum * w_vel[l][i] -
                      options.learning_rate * w_grads[l][i];
        model.weights[l][i] += w_vel[l][i];
      }
      for (std::size_t i = 0; i < model.biases[l].size(); ++i) {
        b_vel[l][i] = options.momentum * b_vel[l][i] -
                      options.learning_rate * b_grads[l][i];
        model.biases[l][i] += b_vel[l][i];
      }
    }
  }

  int correct = 0;
  for (std::size_t s = 0; s < feats.size(); ++s) {
    const auto scores = softmax_scores(model.labels,
                                       forward_logits(model, feats[s]));
    if (scores.argmax() == model.labels[static_cast<std::size_t>(targets[s])]) {
      ++correct;
    }
  }
  model.train_accuracy =
      static_cast<double>(correct) / static_cast<double>(feats.size());
  return model;
}

ClassScores SurrogateClassifier::classify(const audio::AudioClip& clip) const {
  if (clip.empty()) throw OracleError("classify: empty clip");
  const auto raw =
      dsp::mean_mfcc(clip, model_.features.n_coeffs, model_.features.n_mels,
                     model_.features.window_s, model_.features.hop_s);
  return softmax_scores(model_.labels,
                        forward_logits(model_, standardized(model_, raw)));
}

std::string to_json(const SurrogateModel& model) {
  nlohmann::json j;
  j["labels"] = model.labels;
  j["layer_sizes"] = model.layer_sizes;
  j["weights"] = model.weights;
  j["biases"] = model.biases;
  j["feature_mean"] = model.feature_mean;
  j["feature_std"] = model.feature_std;
  j["seed"] = model.seed;
  j["train_accuracy"] = model.train_accuracy;
  j["features"] = {{"n_coeffs", model.features.n_coeffs},
                   {"n_mels", model.features.n_mels},
                   {"window_s", model.features.window_s},
                   {"hop_s", model.features.hop_s}};
  return j.dump(2);
}

SurrogateModel surrogate_from_json(const std::string& text) {
  SurrogateModel model;
  try {
    const auto j = nlohmann::json::parse(text);
    model.labels = j.at("labels").get<std::vector<std::string>>();
    model.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    model.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    model.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    model.feature_mean = j.at("feature_mean").get<std::vector<double>>();
    model.feature_std = j.at("feature_std").get<std::vector<double>>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.train_accuracy = j.at("train_accuracy").get<double>();
    const auto& f = j.at("features");
    model.features.n_coeffs = f.at("n_coeffs").get<int>();
    model.features.n_mels = f.at("n_mels").get<int>();
    model.features.window_s = f.at("window_s").get<double>();
    model.features.hop_s = f.at("hop_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("surrogate model parse error: ") + e.what());
  }
  // Shape consistency: each layer chains into the next.
  if (model.layer_sizes.size() != model.weights.size() + 1 ||
      model.weights.size() != model.biases.size()) {
    throw DataError("surrogate model: layer bookkeeping inconsistent");
  }
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const std::size_t in = static_cast<std::size_t>(model.layer_sizes[l]);
    const std::size_t out = static_cast<std::size_t>(model.layer_sizes[l + 1]);
    if (model.weights[l].size() != in * out || model.biases[l].size() != out) {
      throw DataError("surrogate model: layer " + std::to_string(l) +
                      " has inconsistent dimensions");
    }
  }
  if (model.layer_sizes.back() != static_cast<int>(model.labels.size())) {
    throw DataError("surrogate model: output width != number of labels");
  }
  return model;
}

void save_surrogate(const SurrogateModel& model, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("save_surrogate: cannot open " + path);
  os << to_json(model) << '\n';
}

SurrogateModel load_surrogate(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("load_surrogate: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return surrogate_from_json(text);
}

}  // namespace oracles
}  // namespace eonkit
