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

#include "eonkit/genome.hpp"

#include <algorithm>
#include <cmath>

#include "eonkit/errors.hpp"

namespace eonkit {
namespace gp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_unit(double v, const Range& r) {
  return r.width() > 0.0 ? (v - r.min) / r.width() : 0.0;
}

double from_unit(double u, const Range& r) { return r.min + u * r.width(); }

}  // namespace

std::vector<double> normalized_view(const EonGenome& genome,
                                    const ParameterRanges& ranges) {
  std::vector<double> view;
  view.reserve(genome.tones.size() * kFieldsPerTone);
  for (const Tone& t : genome.tones) {
    view.push_back(to_unit(t.frequency_hz, ranges.frequency));
    view.push_back(to_unit(t.amplitude, ranges.amplitude));
    view.push_back(to_unit(t.offset_s, ranges.offset));
    view.push_back(to_unit(t.duration_s, ranges.duration));
  }
  return view;
}

EonGenome denormalize(const std::vector<double>& view,
                      const ParameterRanges& ranges) {
  if (view.size() % kFieldsPerTone != 0) {
    throw ConfigError("denormalize: view length not a multiple of 4");
  }
  for (double u : view) {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw ConfigError("denormalize: normalized value outside [0, 1]");
    }
  }
  EonGenome genome;
  genome.tones.resize(view.size() / kFieldsPerTone);
  for (std::size_t i = 0; i < genome.tones.size(); ++i) {
    Tone& t = genome.tones[i];
    t.frequency_hz = from_unit(view[i * 4 + 0], ranges.frequency);
    t.amplitude = from_unit(view[i * 4 + 1], ranges.amplitude);
    t.offset_s = from_unit(view[i * 4 + 2], ranges.offset);
    t.duration_s = from_unit(view[i * 4 + 3], ranges.duration);
  }
  return genome;
}

bool in_ranges(const EonGenome& genome, const ParameterRanges& ranges) {
  for (const Tone& t : genome.tones) {
    if (!ranges.frequency.contains(t.frequency_hz)) return false;
    if (!ranges.amplitude.contains(t.amplitude)) return false;
    if (!ranges.offset.contains(t.offset_s)) return false;
    if (!ranges.duration.contains(t.duration_s)) return false;
  }
  return true;
}

void validate_genome(const EonGenome& genome, const ParameterRanges& ranges) {
  for (std::size_t i = 0; i < genome.tones.size(); ++i) {
    const Tone& t = genome.tones[i];
    const std::string where = "tone " + std::to_string(i);
    if (!ranges.frequency.contains(t.frequency_hz)) {
      throw ConfigError("genome " + where + ": frequency out of range");
    }
    if (!ranges.amplitude.contains(t.amplitude)) {
      throw ConfigError("genome " + where + ": amplitude out of range");
    }
    if (!ranges.offset.contains(t.offset_s)) {
      throw ConfigError("genome " + where + ": offset out of range");
    }
    if (!ranges.duration.contains(t.duration_s)) {
      throw ConfigError("genome " + where + ": duration out of range");
    }
  }
}

double tone_end_seconds(const EonGenome& genome) {
  double end = 0.0;
  for (const Tone& t : genome.tones) {
    end = std::max(end, t.offset_s + t.duration_s);
  }
  return end;
}

audio::AudioClip render_tones(const std::vector<Tone>& tones, int sample_rate,
                              double total_duration, double max_amplitude) {
  if (sample_rate <= 0) throw ConfigError("render_tones: invalid sample rate");
  for (const Tone& t : tones) {
    if (sample_rate <= 2.0 * t.frequency_hz) {
      throw ConfigError("render_tones: sample rate must exceed twice the "
                        "highest tone frequency");
    }
    if (t.amplitude < 0.0 || t.amplitude > max_amplitude) {
      throw ConfigError("render_tones: amplitude exceeds the hard ceiling");
    }
    if (total_duration + 1e-12 < t.offset_s + t.duration_s) {
      throw ConfigError("render_tones: total_duration shorter than a tone's "
                        "active window");
    }
  }
  audio::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(
      static_cast<std::size_t>(std::llround(total_duration * sample_rate)),
      0.0);
  for (const Tone& t : tones) {
    const std::size_t first = static_cast<std::size_t>(
        std::ceil(t.offset_s * sample_rate - 1e-9));
    const std::size_t last = std::min(
        clip.samples.size(),
        static_cast<std::size_t>(
            std::ceil((t.offset_s + t.duration_s) * sample_rate - 1e-9)));
    const double w = 2.0 * kPi * t.frequency_hz;
    for (std::size_t n = first; n < last; ++n) {
      // Phase is measured from the tone's own onset; tones start at zero
      // phase.
      const double tt = static_cast<double>(n) / sample_rate - t.offset_s;
      clip.samples[n] += t.amplitude * std::sin(w * tt);
    }
  }
  for (auto& v : clip.samples) v = std::max(-1.0, std::min(1.0, v));
  return clip;
}

audio::AudioClip synthesize_eon(const EonGenome& genome, int sample_rate,
                                double total_duration,
                                const ParameterRanges& ranges) {
  validate_genome(genome, ranges);
  return render_tones(genome.tones, sample_rate, total_duration,
                      ranges.amplitude.max);
}

}  // namespace gp
}  // namespace eonkit
