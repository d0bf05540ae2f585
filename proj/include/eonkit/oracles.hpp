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

#ifndef EONKIT_ORACLES_HPP_
#define EONKIT_ORACLES_HPP_

#include <map>
#include <string>
#include <vector>

#include "eonkit/audio.hpp"

namespace eonkit {
namespace oracles {

// Softmax result over the classifier's label set. Probabilities are
// non-negative and sum to 1 within 1e-6; argmax ties break toward the
// lexicographically smaller label, which keeps every downstream decision
// deterministic.
struct ClassScores {
  std::vector<std::string> labels;            // ordered class list
  std::map<std::string, double> scores;

  double score(const std::string& label) const;
  std::string argmax() const;
};

// Normalized transcription: lowercased tokens, punctuation stripped,
// whitespace collapsed. Confidence is scaled to [0, 1].
struct TranscriptResult {
  std::vector<std::string> tokens;
  double confidence = 0.0;

  bool operator==(const TranscriptResult&) const = default;
  std::string joined() const;
};

// Lowercase, strip punctuation, collapse whitespace, split to tokens.
std::vector<std::string> normalize_transcript(const std::string& text);

class Classifier {
 public:
  virtual ~Classifier() = default;
  // Deterministic; throws OracleError when the backend cannot answer.
  virtual ClassScores classify(const audio::AudioClip& clip) const = 0;
  virtual std::vector<std::string> labels() const = 0;
};

class Transcriber {
 public:
  virtual ~Transcriber() = default;
  // utterance_id identifies the manifest entry the clip derives from; real
  // ASR backends ignore it, the mock uses it to locate ground truth.
  virtual TranscriptResult transcribe(const audio::AudioClip& clip,
                                      const std::string& utterance_id)
      const = 0;
};

}  // namespace oracles
}  // namespace eonkit

#endif  // EONKIT_ORACLES_HPP_
