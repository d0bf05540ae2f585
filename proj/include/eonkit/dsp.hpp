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

#ifndef EONKIT_DSP_HPP_
#define EONKIT_DSP_HPP_

#include <complex>
#include <vector>

#include "eonkit/audio.hpp"

namespace eonkit {
namespace dsp {

enum class SpectrogramScale { kLinear, kMel };

// Magnitude grid [frame x bin] plus the analysis geometry needed to invert
// it. For kLinear, bins are one-sided FFT bins (fft_size/2 + 1 of them); for
// kMel, bins are triangular mel filters and bin_width_hz is the mean filter
// spacing.
struct Spectrogram {
  std::vector<std::vector<double>> magnitudes;
  SpectrogramScale scale = SpectrogramScale::kLinear;
  int sample_rate = 0;
  int window_samples = 0;
  int hop_samples = 0;
  int fft_size = 0;
  std::size_t source_samples = 0;  // originating clip length
  double frame_hop_seconds = 0.0;
  double bin_width_hz = 0.0;
  // Mel geometry (kMel only).
  int n_mels = 0;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;

  std::size_t frames() const { return magnitudes.size(); }
  std::size_t bins() const {
    return magnitudes.empty() ? 0 : magnitudes.front().size();
  }
};

// In-place radix-2 FFT; size must be a power of two. inverse=true applies
// the conjugate transform including the 1/N factor.
void fft(std::vector<std::complex<double>>& data, bool inverse);

std::size_t next_pow2(std::size_t n);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular mel filter bank, rows = filters over one-sided FFT bins.
std::vector<std::vector<double>> mel_filter_bank(int n_mels, int fft_size,
                                                 int sample_rate, double fmin,
                                                 double fmax);

// The n_mels + 2 mel-equidistant edge frequencies in Hz; filter k peaks at
// edge k+1 and spans (edge k, edge k+2).
std::vector<double> mel_edge_frequencies(int n_mels, double fmin, double fmax);

// Hann-windowed complex STFT frames (one-sided, fft_size/2+1 bins). The
// window length is window_s seconds, the FFT size the next power of two.
// Throws DataError if the clip is shorter than one window.
std::vector<std::vector<std::complex<double>>> stft_complex(
    const audio::AudioClip& clip, double window_s, double hop_s,
    int* out_window_samples = nullptr, int* out_hop_samples = nullptr,
    int* out_fft_size = nullptr);

// Weighted overlap-add inverse of stft_complex, trimmed/padded to
// total_samples.
audio::AudioClip istft_complex(
    const std::vector<std::vector<std::complex<double>>>& frames,
    int sample_rate, int window_samples, int hop_samples, int fft_size,
    std::size_t total_samples);

Spectrogram stft(const audio::AudioClip& clip, double window_s, double hop_s);

Spectrogram mel_spectrogram(const audio::AudioClip& clip, int n_mels,
                            double window_s = 0.025, double hop_s = 0.010,
                            double fmin = 0.0, double fmax = -1.0);

// Standard MFCC pipeline: Hann STFT -> power -> mel -> log -> DCT-II
// (orthonormal). Rows are frames, columns coefficients.
std::vector<std::vector<double>> mfcc(const audio::AudioClip& clip,
                                      int n_coeffs, int n_mels = 40,
                                      double window_s = 0.025,
                                      double hop_s = 0.010);

// Mean over frames of the MFCC grid; the surrogate's per-clip feature.
std::vector<double> mean_mfcc(const audio::AudioClip& clip, int n_coeffs,
                              int n_mels = 40, double window_s = 0.025,
                              double hop_s = 0.010);

// Ridge-regularized pseudo-inverse of the mel filter bank followed by
// Griffin-Lim phase reconstruction (zero-phase init, no momentum, so the
// spectral-convergence loss is non-increasing). iterations must be >= 1.
// When loss_trace is non-null it receives one loss value per iteration.
audio::AudioClip invert_mel(const Spectrogram& spec, int iterations,
                            std::vector<double>* loss_trace = nullptr);

// Cascaded second-order band-stop sections, one per center frequency,
// applied forward-backward over an odd-extension pad so edge transients do
// not leak into the output. Throws DataError for centers >= Nyquist.
audio::AudioClip notch_filter(const audio::AudioClip& clip,
                              const std::vector<double>& center_frequencies,
                              double half_width_hz);

// Single-bin DFT power at `frequency` over samples [begin, end). Test oracle
// for tone energy checks; returns mean squared magnitude normalized so a
// sinusoid of amplitude a yields a^2/2.
double goertzel_power(const std::vector<double>& samples, int sample_rate,
                      double frequency, std::size_t begin, std::size_t end);

// Frequency of the dominant FFT bin of the whole clip.
double dominant_frequency(const audio::AudioClip& clip);

}  // namespace dsp
}  // namespace eonkit

#endif  // EONKIT_DSP_HPP_
