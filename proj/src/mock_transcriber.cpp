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

#include "eonkit/mock_transcriber.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "eonkit/errors.hpp"

namespace eonkit {
namespace oracles {

std::uint64_t clip_hash(const audio::AudioClip& clip) {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (double v : clip.samples) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      mix_byte(static_cast<unsigned char>(bits >> (8 * i)));
    }
  }
  return h;
}

void MockTranscriber::register_sample(const std::string& utterance_id,
                                      const audio::AudioClip& clean,
                                      const std::string& transcript) {
  Entry entry;
  entry.clean = clean;
  entry.tokens = normalize_transcript(transcript);
  entry.signal_rms = audio::rms(clean.samples);
  if (entry.tokens.empty()) {
    throw DataError("mock transcriber: empty transcript for utterance '" +
                    utterance_id + "'");
  }
  registry_[utterance_id] = std::move(entry);
}

TranscriptResult MockTranscriber::transcribe(
    const audio::AudioClip& clip, const std::string& utterance_id) const {
  if (clip.empty()) throw OracleError("transcribe: empty clip");
  const auto it = registry_.find(utterance_id);
  if (it == registry_.end()) {
    throw OracleError("mock transcriber: no ground truth registered for '" +
                      utterance_id + "'");
  }
  const Entry& entry = it->second;
  if (clip.sample_rate != entry.clean.sample_rate) {
    throw OracleError("mock transcriber: sample rate differs from the "
                      "registered clean clip");
  }

  const std::size_t n =
      std::min(clip.samples.size(), entry.clean.samples.size());
  double noise_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = clip.samples[i] - entry.clean.samples[i];
    noise_sq += d * d;
  }
  const double noise_rms =
      n > 0 ? std::sqrt(noise_sq / static_cast<double>(n)) : 0.0;
  const double ratio =
      entry.signal_rms > 0.0 ? noise_rms / entry.signal_rms : 0.0;

  TranscriptResult result;
  result.confidence = std::clamp(
      1.0 - config_.k * std::max(0.0, ratio - config_.floor), 0.0, 1.0);
  result.tokens = entry.tokens;
  if (result.confidence < config_.drop_threshold) {
    const std::size_t idx = static_cast<std::size_t>(
        clip_hash(clip) % result.tokens.size());
    result.tokens[idx] += "x";  // still a non-empty token, never the original
  }
  return result;
}

}  // namespace oracles
}  // namespace eonkit
