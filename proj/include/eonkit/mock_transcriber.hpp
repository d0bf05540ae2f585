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

#ifndef EONKIT_MOCK_TRANSCRIBER_HPP_
#define EONKIT_MOCK_TRANSCRIBER_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eonkit/oracles.hpp"

namespace eonkit {
namespace oracles {

// Deterministic transcription stand-in. Confidence degrades with the noise
// the presented clip carries relative to the registered clean clip:
//
//   ratio      = noise_rms / signal_rms   (noise = presented - clean)
//   confidence = clamp(1 - k * max(0, ratio - floor), 0, 1)
//
// Below drop_threshold one token is corrupted, chosen by a hash of the
// presented samples, which gives the evaluation a reproducible
// transcription-failure mode.
struct MockTranscriberConfig {
  double k = 2.0;
  double floor = 0.01;
  double drop_threshold = 0.5;
};

class MockTranscriber : public Transcriber {
 public:
  explicit MockTranscriber(MockTranscriberConfig config = {})
      : config_(config) {}

  // Registers the clean reference and ground-truth text for an utterance.
  // The transcript is normalized on the way in.
  void register_sample(const std::string& utterance_id,
                       const audio::AudioClip& clean,
                       const std::string& transcript);

  bool has(const std::string& utterance_id) const {
    return registry_.count(utterance_id) > 0;
  }

  // Throws OracleError for an unregistered utterance_id.
  TranscriptResult transcribe(const audio::AudioClip& clip,
                              const std::string& utterance_id) const override;

  const MockTranscriberConfig& config() const { return config_; }

 private:
  struct Entry {
    audio::AudioClip clean;
    std::vector<std::string> tokens;
    double signal_rms = 0.0;
  };

  MockTranscriberConfig config_;
  std::map<std::string, Entry> registry_;
};

// FNV-1a over the raw sample bits; drives deterministic token corruption.
std::uint64_t clip_hash(const audio::AudioClip& clip);

}  // namespace oracles
}  // namespace eonkit

#endif  // EONKIT_MOCK_TRANSCRIBER_HPP_
