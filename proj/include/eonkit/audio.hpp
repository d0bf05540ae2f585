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

#ifndef EONKIT_AUDIO_HPP_
#define EONKIT_AUDIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace eonkit {
namespace audio {

// Mono PCM in [-1, 1] plus its rate. The unit of speech data everywhere.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
  bool empty() const { return samples.empty(); }
};

// Sample-wise sum, hard-clipped to [-1, 1]. The perturbation clip is
// truncated or zero-padded to the speech length before summation, so the
// result always has the speech clip's length. Saturating rather than
// renormalizing keeps the additive-noise loudness semantics intact.
// Throws DataError on sample-rate mismatch.
AudioClip mix(const AudioClip& speech, const AudioClip& perturbation);

// Band-limited (windowed-sinc) resampling to target_rate. Same rate returns
// a copy. Throws DataError for target_rate <= 0.
AudioClip resample(const AudioClip& clip, int target_rate);

double rms(const std::vector<double>& samples);

// WAV I/O: little-endian RIFF, PCM16 (format 1) or float32 (format 3).
// Multi-channel input is averaged down to mono; samples are scaled to the
// internal [-1, 1] float convention.
AudioClip read_wav(const std::string& path);
void write_wav_float32(const std::string& path, const AudioClip& clip);
void write_wav_pcm16(const std::string& path, const AudioClip& clip);

}  // namespace audio
}  // namespace eonkit

#endif  // EONKIT_AUDIO_HPP_
