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

#include "eonkit/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "eonkit/errors.hpp"

namespace eonkit {
namespace audio {

namespace {

double clip1(double v) { return std::max(-1.0, std::min(1.0, v)); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

AudioClip mix(const AudioClip& speech, const AudioClip& perturbation) {
  if (speech.sample_rate != perturbation.sample_rate) {
    throw DataError("mix: sample-rate mismatch (" +
                    std::to_string(speech.sample_rate) + " vs " +
                    std::to_string(perturbation.sample_rate) +
                    "); resample first");
  }
  AudioClip out;
  out.sample_rate = speech.sample_rate;
  out.samples.resize(speech.samples.size());
  const std::size_t overlap =
      std::min(speech.samples.size(), perturbation.samples.size());
  for (std::size_t i = 0; i < overlap; ++i) {
    out.samples[i] = clip1(speech.samples[i] + perturbation.samples[i]);
  }
  for (std::size_t i = overlap; i < speech.samples.size(); ++i) {
    out.samples[i] = clip1(speech.samples[i]);
  }
  return out;
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    throw DataError("resample: target rate must be positive");
  }
  if (clip.sample_rate <= 0) {
    throw DataError("resample: source clip has invalid sample rate");
  }
  if (target_rate == clip.sample_rate || clip.samples.empty()) {
    AudioClip out = clip;
    out.sample_rate = target_rate;
    return out;
  }

  const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
  // When downsampling, the kernel cutoff shrinks to the new Nyquist and the
  // support widens by the same factor so the transition band stays put.
  const double cutoff = std::min(1.0, ratio);
  const int half_taps = 32;
  const double support = half_taps / cutoff;

  const std::size_t n_in = clip.samples.size();
  const std::size_t n_out = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n_in) * ratio));

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);

  for (std::size_t j = 0; j < n_out; ++j) {
    const double center = static_cast<double>(j) / ratio;
    const long lo = static_cast<long>(std::ceil(center - support));
    const long hi = static_cast<long>(std::floor(center + support));
    double acc = 0.0;
    for (long n = std::max(0L, lo);
         n <= std::min(static_cast<long>(n_in) - 1, hi); ++n) {
      const double x = (n - center) * cutoff;
      double sinc = 1.0;
      if (x != 0.0) sinc = std::sin(kPi * x) / (kPi * x);
      // Hann window over the kernel support.
      const double w = 0.5 + 0.5 * std::cos(kPi * (n - center) / support);
      acc += clip.samples[static_cast<std::size_t>(n)] * sinc * cutoff * w;
    }
    out.samples[j] = clip1(acc);
  }
  return out;
}

double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void append_u32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void write_wav(const std::string& path, const AudioClip& clip,
               std::uint16_t format, int bytes_per_sample) {
  if (clip.sample_rate <= 0) {
    throw DataError("write_wav: invalid sample rate");
  }
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(clip.samples.size() * bytes_per_sample);
  std::string buf;
  buf.reserve(44 + data_size);
  buf += "RIFF";
  append_u32(buf, 36 + data_size);
  buf += "WAVEfmt ";
  append_u32(buf, 16);
  append_u16(buf, format);
  append_u16(buf, 1);  // mono canonical output
  append_u32(buf, static_cast<std::uint32_t>(clip.sample_rate));
  append_u32(buf, static_cast<std::uint32_t>(clip.sample_rate *
                                             bytes_per_sample));
  append_u16(buf, static_cast<std::uint16_t>(bytes_per_sample));
  append_u16(buf, static_cast<std::uint16_t>(8 * bytes_per_sample));
  buf += "data";
  append_u32(buf, data_size);

  if (format == 1) {
    for (double v : clip.samples) {
      const double c = clip1(v);
      const int q = static_cast<int>(std::lround(c * 32767.0));
      append_u16(buf, static_cast<std::uint16_t>(
                          static_cast<std::int16_t>(std::clamp(q, -32768, 32767))));
    }
  } else {
    for (double v : clip.samples) {
      const float f = static_cast<float>(clip1(v));
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      append_u32(buf, bits);
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("write_wav: cannot open " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw DataError("write_wav: write failed for " + path);
}

}  // namespace

void write_wav_float32(const std::string& path, const AudioClip& clip) {
  write_wav(path, clip, 3, 4);
}

void write_wav_pcm16(const std::string& path, const AudioClip& clip) {
  write_wav(path, clip, 1, 2);
}

AudioClip read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("read_wav: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(is)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0) {
    throw DataError("read_wav: not a RIFF/WAVE file: " + path);
  }

  const unsigned char* bytes =
      reinterpret_cast<const unsigned char*>(buf.data());
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id = buf.substr(pos, 4);
    const std::uint32_t size = read_u32(bytes + pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt " && body + 16 <= buf.size()) {
      format = read_u16(bytes + body);
      channels = read_u16(bytes + body + 2);
      rate = read_u32(bytes + body + 4);
      bits = read_u16(bytes + body + 14);
    } else if (id == "data") {
      data_off = body;
      data_len = std::min<std::size_t>(size, buf.size() - body);
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }

  if (rate == 0 || channels == 0 || data_off == 0) {
    throw DataError("read_wav: missing fmt or data chunk: " + path);
  }
  if (!((format == 1 && bits == 16) || (format == 3 && bits == 32))) {
    throw DataError("read_wav: unsupported format (want PCM16 or float32): " +
                    path);
  }

  const int bps = bits / 8;
  const std::size_t frame_size = static_cast<std::size_t>(bps) * channels;
  const std::size_t n_frames = data_len / frame_size;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = bytes + data_off + f * frame_size + c * bps;
      if (format == 1) {
        const std::int16_t v =
            static_cast<std::int16_t>(p[0] | (p[1] << 8));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float fv;
        std::uint32_t raw = read_u32(p);
        std::memcpy(&fv, &raw, sizeof fv);
        acc += static_cast<double>(fv);
      }
    }
    clip.samples[f] = clip1(acc / channels);
  }
  return clip;
}

}  // namespace audio
}  // namespace eonkit
