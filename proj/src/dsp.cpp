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

#include "eonkit/dsp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "eonkit/errors.hpp"

namespace eonkit {
namespace dsp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-10;

// Periodic Hann; w[0] = 0 and the implicit w[W] = 0 never materializes.
std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[static_cast<std::size_t>(n)] =
        0.5 - 0.5 * std::cos(2.0 * kPi * n / length);
  }
  return w;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw DataError("fft: size must be a power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) *
                       (inverse ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= inv_n;
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> mel_edge_frequencies(int n_mels, double fmin,
                                         double fmax) {
  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    edges[static_cast<std::size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }
  return edges;
}

std::vector<std::vector<double>> mel_filter_bank(int n_mels, int fft_size,
                                                 int sample_rate, double fmin,
                                                 double fmax) {
  if (n_mels < 1) throw ConfigError("mel_filter_bank: n_mels must be >= 1");
  const int n_bins = fft_size / 2 + 1;
  const auto edges = mel_edge_frequencies(n_mels, fmin, fmax);
  std::vector<std::vector<double>> bank(
      static_cast<std::size_t>(n_mels),
      std::vector<double>(static_cast<std::size_t>(n_bins), 0.0));
  const double hz_per_bin = static_cast<double>(sample_rate) / fft_size;
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[static_cast<std::size_t>(m)];
    const double center = edges[static_cast<std::size_t>(m) + 1];
    const double right = edges[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = k * hz_per_bin;
      double w = 0.0;
      if (f > left && f < center) {
        w = (f - left) / (center - left);
      } else if (f == center) {
        w = 1.0;
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      bank[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = w;
    }
  }
  return bank;
}

std::vector<std::vector<std::complex<double>>> stft_complex(
    const audio::AudioClip& clip, double window_s, double hop_s,
    int* out_window_samples, int* out_hop_samples, int* out_fft_size) {
  if (!(window_s > hop_s && hop_s > 0.0)) {
    throw ConfigError("stft: require window_s > hop_s > 0");
  }
  if (clip.sample_rate <= 0) throw DataError("stft: invalid sample rate");
  const int window =
      static_cast<int>(std::lround(window_s * clip.sample_rate));
  const int hop = static_cast<int>(std::lround(hop_s * clip.sample_rate));
  if (window < 2 || hop < 1) throw ConfigError("stft: window or hop too small");
  if (clip.samples.size() < static_cast<std::size_t>(window)) {
    throw DataError("stft: clip shorter than one analysis window");
  }
  const int fft_size = static_cast<int>(next_pow2(
      static_cast<std::size_t>(window)));
  const std::size_t n_frames =
      1 + (clip.samples.size() - static_cast<std::size_t>(window)) /
              static_cast<std::size_t>(hop);
  const auto win = hann_window(window);
  const std::size_t n_bins = static_cast<std::size_t>(fft_size) / 2 + 1;

  std::vector<std::vector<std::complex<double>>> frames(n_frames);
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size));
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t off = f * static_cast<std::size_t>(hop);
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    for (int n = 0; n < window; ++n) {
      buf[static_cast<std::size_t>(n)] =
          clip.samples[off + static_cast<std::size_t>(n)] *
          win[static_cast<std::size_t>(n)];
    }
    fft(buf, false);
    frames[f].assign(buf.begin(), buf.begin() + static_cast<long>(n_bins));
  }
  if (out_window_samples) *out_window_samples = window;
  if (out_hop_samples) *out_hop_samples = hop;
  if (out_fft_size) *out_fft_size = fft_size;
  return frames;
}

audio::AudioClip istft_complex(
    const std::vector<std::vector<std::complex<double>>>& frames,
    int sample_rate, int window_samples, int hop_samples, int fft_size,
    std::size_t total_samples) {
  audio::AudioClip out;
  out.sample_rate = sample_rate;
  if (frames.empty()) {
    out.samples.assign(total_samples, 0.0);
    return out;
  }
  const std::size_t n_frames = frames.size();
  const std::size_t span =
      (n_frames - 1) * static_cast<std::size_t>(hop_samples) +
      static_cast<std::size_t>(window_samples);
  std::vector<double> acc(span, 0.0);
  std::vector<double> den(span, 0.0);
  const auto win = hann_window(window_samples);
  const std::size_t n_bins = static_cast<std::size_t>(fft_size) / 2 + 1;

  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size));
  for (std::size_t f = 0; f < n_frames; ++f) {
    // Rebuild the full spectrum from the one-sided half.
    for (std::size_t k = 0; k < n_bins; ++k) buf[k] = frames[f][k];
    for (std::size_t k = n_bins; k < static_cast<std::size_t>(fft_size); ++k) {
      buf[k] = std::conj(frames[f][static_cast<std::size_t>(fft_size) - k]);
    }
    fft(buf, true);
    const std::size_t off = f * static_cast<std::size_t>(hop_samples);
    for (int n = 0; n < window_samples; ++n) {
      const double w = win[static_cast<std::size_t>(n)];
      acc[off + static_cast<std::size_t>(n)] +=
          buf[static_cast<std::size_t>(n)].real() * w;
      den[off + static_cast<std::size_t>(n)] += w * w;
    }
  }
  out.samples.assign(total_samples, 0.0);
  const std::size_t copy = std::min(total_samples, span);
  for (std::size_t n = 0; n < copy; ++n) {
    out.samples[n] = den[n] > 1e-12 ? acc[n] / den[n] : 0.0;
  }
  return out;
}

Spectrogram stft(const audio::AudioClip& clip, double window_s, double hop_s) {
  Spectrogram spec;
  int window = 0, hop = 0, fft_size = 0;
  const auto frames = stft_complex(clip, window_s, hop_s, &window, &hop,
                                   &fft_size);
  spec.scale = SpectrogramScale::kLinear;
  spec.sample_rate = clip.sample_rate;
  spec.window_samples = window;
  spec.hop_samples = hop;
  spec.fft_size = fft_size;
  spec.source_samples = clip.samples.size();
  spec.frame_hop_seconds = static_cast<double>(hop) / clip.sample_rate;
  spec.bin_width_hz = static_cast<double>(clip.sample_rate) / fft_size;
  spec.magnitudes.resize(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    spec.magnitudes[f].resize(frames[f].size());
    for (std::size_t k = 0; k < frames[f].size(); ++k) {
      spec.magnitudes[f][k] = std::abs(frames[f][k]);
    }
  }
  return spec;
}

Spectrogram mel_spectrogram(const audio::AudioClip& clip, int n_mels,
                            double window_s, double hop_s, double fmin,
                            double fmax) {
  if (n_mels < 1) throw ConfigError("mel_spectrogram: n_mels must be >= 1");
  Spectrogram lin = stft(clip, window_s, hop_s);
  if (fmax <= 0.0) fmax = clip.sample_rate / 2.0;
  const auto bank =
      mel_filter_bank(n_mels, lin.fft_size, clip.sample_rate, fmin, fmax);

  Spectrogram spec;
  spec.scale = SpectrogramScale::kMel;
  spec.sample_rate = lin.sample_rate;
  spec.window_samples = lin.window_samples;
  spec.hop_samples = lin.hop_samples;
  spec.fft_size = lin.fft_size;
  spec.source_samples = lin.source_samples;
  spec.frame_hop_seconds = lin.frame_hop_seconds;
  spec.n_mels = n_mels;
  spec.fmin_hz = fmin;
  spec.fmax_hz = fmax;
  spec.bin_width_hz = (fmax - fmin) / (n_mels + 1);
  spec.magnitudes.resize(lin.frames());
  for (std::size_t f = 0; f < lin.frames(); ++f) {
    spec.magnitudes[f].assign(static_cast<std::size_t>(n_mels), 0.0);
    for (int m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      const auto& row = bank[static_cast<std::size_t>(m)];
      for (std::size_t k = 0; k < row.size(); ++k) {
        acc += row[k] * lin.magnitudes[f][k];
      }
      spec.magnitudes[f][static_cast<std::size_t>(m)] = acc;
    }
  }
  return spec;
}

std::vector<std::vector<double>> mfcc(const audio::AudioClip& clip,
                                      int n_coeffs, int n_mels,
                                      double window_s, double hop_s) {
  if (n_coeffs < 1) throw ConfigError("mfcc: n_coeffs must be >= 1");
  if (n_coeffs > n_mels) {
    throw ConfigError("mfcc: n_coeffs cannot exceed n_mels");
  }
  const Spectrogram mel = mel_spectrogram(clip, n_mels, window_s, hop_s);
  std::vector<std::vector<double>> out(mel.frames());
  // Orthonormal DCT-II over the log-mel vector.
  const double scale0 = std::sqrt(1.0 / n_mels);
  const double scale = std::sqrt(2.0 / n_mels);
  for (std::size_t f = 0; f < mel.frames(); ++f) {
    std::vector<double> logmel(static_cast<std::size_t>(n_mels));
    for (int m = 0; m < n_mels; ++m) {
      logmel[static_cast<std::size_t>(m)] = std::log(
          std::max(mel.magnitudes[f][static_cast<std::size_t>(m)], kLogFloor));
    }
    out[f].resize(static_cast<std::size_t>(n_coeffs));
    for (int c = 0; c < n_coeffs; ++c) {
      double acc = 0.0;
      for (int m = 0; m < n_mels; ++m) {
        acc += logmel[static_cast<std::size_t>(m)] *
               std::cos(kPi * c * (2.0 * m + 1.0) / (2.0 * n_mels));
      }
      out[f][static_cast<std::size_t>(c)] = acc * (c == 0 ? scale0 : scale);
    }
  }
  return out;
}

std::vector<double> mean_mfcc(const audio::AudioClip& clip, int n_coeffs,
                              int n_mels, double window_s, double hop_s) {
  const auto grid = mfcc(clip, n_coeffs, n_mels, window_s, hop_s);
  std::vector<double> mean(static_cast<std::size_t>(n_coeffs), 0.0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c];
  }
  for (auto& v : mean) v /= static_cast<double>(grid.size());
  return mean;
}

audio::AudioClip invert_mel(const Spectrogram& spec, int iterations,
                            std::vector<double>* loss_trace) {
  if (spec.scale != SpectrogramScale::kMel) {
    throw DataError("invert_mel: spectrogram is not mel-scaled");
  }
  if (iterations < 1) throw ConfigError("invert_mel: iterations must be >= 1");
  if (loss_trace) loss_trace->clear();

  const int n_bins = spec.fft_size / 2 + 1;
  const auto bank = mel_filter_bank(spec.n_mels, spec.fft_size,
                                    spec.sample_rate, spec.fmin_hz,
                                    spec.fmax_hz);
  // Ridge-regularized least-squares inverse of the filter bank:
  // pinv = B^T (B B^T + lambda I)^-1, applied per frame with a clamp at 0.
  Eigen::MatrixXd bmat(spec.n_mels, n_bins);
  for (int m = 0; m < spec.n_mels; ++m) {
    for (int k = 0; k < n_bins; ++k) {
      bmat(m, k) = bank[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
    }
  }
  Eigen::MatrixXd gram = bmat * bmat.transpose();
  const double ridge = 1e-8 * gram.trace() / spec.n_mels;
  gram.diagonal().array() += ridge;
  const Eigen::MatrixXd pinv = bmat.transpose() * gram.ldlt().solve(
      Eigen::MatrixXd::Identity(spec.n_mels, spec.n_mels));

  const std::size_t n_frames = spec.frames();
  std::vector<std::vector<double>> target(n_frames);
  double target_norm_sq = 0.0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    Eigen::VectorXd melvec(spec.n_mels);
    for (int m = 0; m < spec.n_mels; ++m) {
      melvec(m) = spec.magnitudes[f][static_cast<std::size_t>(m)];
    }
    Eigen::VectorXd lin = pinv * melvec;
    target[f].resize(static_cast<std::size_t>(n_bins));
    for (int k = 0; k < n_bins; ++k) {
      const double v = std::max(0.0, lin(k));
      target[f][static_cast<std::size_t>(k)] = v;
      target_norm_sq += v * v;
    }
  }

  // Griffin-Lim with zero-phase init; plain alternating projection keeps the
  // spectral-convergence loss non-increasing and the whole routine
  // deterministic.
  std::vector<std::vector<std::complex<double>>> frames(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    frames[f].resize(static_cast<std::size_t>(n_bins));
    for (int k = 0; k < n_bins; ++k) {
      frames[f][static_cast<std::size_t>(k)] =
          std::complex<double>(target[f][static_cast<std::size_t>(k)], 0.0);
    }
  }

  audio::AudioClip out;
  const double norm = std::sqrt(std::max(target_norm_sq, 1e-30));
  for (int it = 0; it < iterations; ++it) {
    out = istft_complex(frames, spec.sample_rate, spec.window_samples,
                        spec.hop_samples, spec.fft_size, spec.source_samples);
    const auto redone = stft_complex(
        out, static_cast<double>(spec.window_samples) / spec.sample_rate,
        static_cast<double>(spec.hop_samples) / spec.sample_rate);
    double loss_sq = 0.0;
    for (std::size_t f = 0; f < n_frames && f < redone.size(); ++f) {
      for (int k = 0; k < n_bins; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        const double mag = std::abs(redone[f][ks]);
        const double diff = mag - target[f][ks];
        loss_sq += diff * diff;
        // Keep the recomputed phase, restore the target magnitude.
        frames[f][ks] = mag > 1e-12
                            ? redone[f][ks] * (target[f][ks] / mag)
                            : std::complex<double>(target[f][ks], 0.0);
      }
    }
    if (loss_trace) loss_trace->push_back(std::sqrt(loss_sq) / norm);
  }
  out = istft_complex(frames, spec.sample_rate, spec.window_samples,
                      spec.hop_samples, spec.fft_size, spec.source_samples);
  for (auto& v : out.samples) v = std::max(-1.0, std::min(1.0, v));
  return out;
}

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;
};

// RBJ-cookbook notch; zeros sit on the unit circle at the center frequency.
Biquad design_notch(double center_hz, double half_width_hz, int sample_rate) {
  const double w0 = 2.0 * kPi * center_hz / sample_rate;
  const double q = center_hz / (2.0 * half_width_hz);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad s;
  s.b0 = 1.0 / a0;
  s.b1 = -2.0 * std::cos(w0) / a0;
  s.b2 = 1.0 / a0;
  s.a1 = -2.0 * std::cos(w0) / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

void run_biquad(const Biquad& s, std::vector<double>& x) {
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (auto& v : x) {
    const double y = s.b0 * v + s.b1 * x1 + s.b2 * x2 - s.a1 * y1 - s.a2 * y2;
    x2 = x1;
    x1 = v;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace

audio::AudioClip notch_filter(const audio::AudioClip& clip,
                              const std::vector<double>& center_frequencies,
                              double half_width_hz) {
  if (center_frequencies.empty()) return clip;
  if (half_width_hz <= 0.0) {
    throw ConfigError("notch_filter: half_width must be positive");
  }
  const double nyquist = clip.sample_rate / 2.0;
  for (double c : center_frequencies) {
    if (!(c > 0.0) || c >= nyquist) {
      throw DataError("notch_filter: center frequency out of (0, Nyquist)");
    }
  }
  if (clip.samples.empty()) return clip;

  // Odd-extension padding long enough for the narrowest ring-down, then a
  // forward-backward pass so the output is zero-phase and transient-free.
  const std::size_t n = clip.samples.size();
  const std::size_t want = static_cast<std::size_t>(
      std::ceil(2.0 * clip.sample_rate / half_width_hz));
  const std::size_t pad = std::min(n - 1, want);

  std::vector<double> x;
  x.reserve(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    x.push_back(2.0 * clip.samples[0] - clip.samples[pad - i]);
  }
  x.insert(x.end(), clip.samples.begin(), clip.samples.end());
  for (std::size_t i = 0; i < pad; ++i) {
    x.push_back(2.0 * clip.samples[n - 1] - clip.samples[n - 2 - i]);
  }

  for (double c : center_frequencies) {
    const Biquad s = design_notch(c, half_width_hz, clip.sample_rate);
    run_biquad(s, x);
    std::reverse(x.begin(), x.end());
    run_biquad(s, x);
    std::reverse(x.begin(), x.end());
  }

  audio::AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = std::max(-1.0, std::min(1.0, x[pad + i]));
  }
  return out;
}

double goertzel_power(const std::vector<double>& samples, int sample_rate,
                      double frequency, std::size_t begin, std::size_t end) {
  end = std::min(end, samples.size());
  if (begin >= end) return 0.0;
  const std::size_t n = end - begin;
  const double w = 2.0 * kPi * frequency / sample_rate;
  const double coeff = 2.0 * std::cos(w);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double s = samples[i] + coeff * s1 - s2;
    s2 = s1;
    s1 = s;
  }
  const double power = s1 * s1 + s2 * s2 - coeff * s1 * s2;
  // |X(f)|^2 * 2 / N^2 so a sinusoid of amplitude a reads a^2 / 2.
  return power * 2.0 / (static_cast<double>(n) * static_cast<double>(n));
}

double dominant_frequency(const audio::AudioClip& clip) {
  if (clip.samples.empty()) return 0.0;
  const std::size_t n = next_pow2(clip.samples.size());
  std::vector<std::complex<double>> buf(n, std::complex<double>(0.0, 0.0));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    buf[i] = clip.samples[i];
  }
  fft(buf, false);
  std::size_t best = 1;
  double best_mag = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double mag = std::abs(buf[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return static_cast<double>(best) * clip.sample_rate / static_cast<double>(n);
}

}  // namespace dsp
}  // namespace eonkit
