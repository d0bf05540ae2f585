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

#ifndef EONKIT_GENOME_HPP_
#define EONKIT_GENOME_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "eonkit/audio.hpp"

namespace eonkit {
namespace gp {

// One additive sinusoid: active over [offset, offset + duration), zero
// elsewhere, zero starting phase.
struct Tone {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
  double offset_s = 0.0;
  double duration_s = 0.0;

  bool operator==(const Tone&) const = default;
};

struct Range {
  double min = 0.0;
  double max = 0.0;

  double width() const { return max - min; }
  bool contains(double v) const { return v >= min && v <= max; }
  bool operator==(const Range&) const = default;
};

// Closed search-space bounds per tone field. Defaults are the standard
// generation parameters; all configurable.
struct ParameterRanges {
  Range frequency{100.0, 4000.0};
  Range amplitude{0.0067, 0.04};
  Range offset{0.0, 0.5};
  Range duration{2.5, 4.0};

  bool operator==(const ParameterRanges&) const = default;
};

// A GP individual: exactly N tones. Its normalized view is the flat
// [0,1]-rescaled vector (tone-major, field order frequency, amplitude,
// offset, duration) that mutation shuffles over.
struct EonGenome {
  std::vector<Tone> tones;

  bool operator==(const EonGenome&) const = default;
};

constexpr std::size_t kFieldsPerTone = 4;

// Flat normalized vector of size 4 * N; each entry rescaled into [0, 1] by
// its field's range. Fields already at range bounds map exactly to 0 / 1.
std::vector<double> normalized_view(const EonGenome& genome,
                                    const ParameterRanges& ranges);

// Inverse of normalized_view; values outside [0, 1] are a caller bug and
// throw. Round trip reproduces fields within 1e-9.
EonGenome denormalize(const std::vector<double>& view,
                      const ParameterRanges& ranges);

// True when every tone field lies inside its closed range.
bool in_ranges(const EonGenome& genome, const ParameterRanges& ranges);

// Throws ConfigError naming the offending field when out of range.
void validate_genome(const EonGenome& genome, const ParameterRanges& ranges);

// Sum of the genome's tones, each contributing
// amplitude * sin(2 pi f t) within its [offset, offset + duration) window,
// hard-clipped to [-1, 1]. Preconditions: total_duration covers every
// tone's window and sample_rate exceeds twice the highest frequency.
audio::AudioClip synthesize_eon(const EonGenome& genome, int sample_rate,
                                double total_duration,
                                const ParameterRanges& ranges);

// Same rendering path without range validation, used by the amplitude sweep
// where scaled amplitudes may exceed the search range (but never
// max_amplitude).
audio::AudioClip render_tones(const std::vector<Tone>& tones, int sample_rate,
                              double total_duration, double max_amplitude);

// Latest tone end time (offset + duration) across the genome.
double tone_end_seconds(const EonGenome& genome);

}  // namespace gp
}  // namespace eonkit

#endif  // EONKIT_GENOME_HPP_
