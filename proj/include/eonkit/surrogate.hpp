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

#ifndef EONKIT_SURROGATE_HPP_
#define EONKIT_SURROGATE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eonkit/audio.hpp"
#include "eonkit/oracles.hpp"

namespace eonkit {
namespace oracles {

// Feature extraction settings baked into a trained model: classification of
// a clip is the MLP forward pass over its standardized mean-MFCC vector.
struct FeatureConfig {
  int n_coeffs = 40;
  int n_mels = 40;
  double window_s = 0.025;
  double hop_s = 0.010;

  bool operator==(const FeatureConfig&) const = default;
};

// Feed-forward network over time-averaged MFCC features. weights[l] has
// shape [out x in] stored row-major; ReLU between layers, softmax head.
struct SurrogateModel {
  FeatureConfig features;
  std::vector<std::string> labels;
  std::vector<int> layer_sizes;  // input, hidden..., output
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  // Per-feature standardization fitted on the training set.
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  std::uint64_t seed = 0;
  double train_accuracy = 0.0;

  std::size_t n_layers() const { return weights.size(); }
};

struct TrainOptions {
  std::vector<int> hidden_sizes{64, 48, 32, 24, 16, 12};
  int epochs = 200;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::uint64_t seed = 1;
};

// Logits for a raw (already standardized) feature vector.
std::vector<double> forward_logits(const SurrogateModel& model,
                                   const std::vector<double>& features);

ClassScores softmax_scores(const std::vector<std::string>& labels,
                           const std::vector<double>& logits);

// Deterministic full-batch gradient descent on cross-entropy over mean-MFCC
// features. Requires >= 2 classes and >= 4 samples per class; aborts with a
// diagnostic on non-finite loss. epochs = 0 returns the initialized model
// untouched.
SurrogateModel train_surrogate(
    const std::vector<std::pair<audio::AudioClip, std::string>>& dataset,
    const TrainOptions& options, const FeatureConfig& features = {},
    std::vector<double>* loss_trace = nullptr);

// Backprop gradients for one batch of (features, label index) pairs; exposed
// so the finite-difference check can compare against the training path.
void cross_entropy_gradients(const SurrogateModel& model,
                             const std::vector<std::vector<double>>& features,
                             const std::vector<int>& label_indices,
                             std::vector<std::vector<double>>* weight_grads,
                             std::vector<std::vector<double>>* bias_grads,
                             double* loss);

std::string to_json(const SurrogateModel& model);
SurrogateModel surrogate_from_json(const std::string& text);
void save_surrogate(const SurrogateModel& model, const std::string& path);
SurrogateModel load_surrogate(const std::string& path);

// Classifier backend wrapping a trained model.
class SurrogateClassifier : public Classifier {
 public:
  explicit SurrogateClassifier(SurrogateModel model)
      : model_(std::move(model)) {}

  ClassScores classify(const audio::AudioClip& clip) const override;
  std::vector<std::string> labels() const override { return model_.labels; }
  const SurrogateModel& model() const { return model_; }

 private:
  SurrogateModel model_;
};

}  // namespace oracles
}  // namespace eonkit

#endif  // EONKIT_SURROGATE_HPP_
