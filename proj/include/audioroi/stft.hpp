// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "audioroi/audio.hpp"
#include "audioroi/op_counter.hpp"

namespace audioroi::dsp {

enum class Window { Hann, Rect };

struct StftConfig {
  std::size_t frame_size = 512;
  std::size_t hop_size = 256;
  Window window = Window::Hann;

  /// Throws std::invalid_argument unless 0 < hop <= frame and frame is even.
  void validate() const;
  std::size_t num_bins() const { return frame_size / 2 + 1; }
};

/// Periodic window of length n (periodic Hann sums to a constant at hop n/k).
std::vector<double> make_window(Window window, std::size_t n);

/// Number of full frames in a signal of `length` samples; partial tail
/// frames are dropped.
std::size_t num_stft_frames(std::size_t length, const StftConfig& config);

/// Complex STFT indexed [channel][frame][bin].
class Spectrogram {
 public:
  Spectrogram(std::size_t channels, std::size_t frames, StftConfig config,
              double sample_rate);

  std::size_t num_channels() const { return channels_; }
  std::size_t num_frames() const { return frames_; }
  std::size_t num_bins() const { return bins_; }
  const StftConfig& config() const { return config_; }
  double sample_rate() const { return sample_rate_; }

  std::span<std::complex<double>> frame(std::size_t channel, std::size_t t);
  std::span<const std::complex<double>> frame(std::size_t channel,
                                              std::size_t t) const;

  std::complex<double>& at(std::size_t channel, std::size_t t, std::size_t k) {
    return data_[index(channel, t, k)];
  }
  const std::complex<double>& at(std::size_t channel, std::size_t t,
                                 std::size_t k) const {
    return data_[index(channel, t, k)];
  }

  bool same_shape(const Spectrogram& other) const;

 private:
  std::size_t index(std::size_t c, std::size_t t, std::size_t k) const {
    return (c * frames_ + t) * bins_ + k;
  }

  std::size_t channels_;
  std::size_t frames_;
  std::size_t bins_;
  StftConfig config_;
  double sample_rate_;
  std::vector<std::complex<double>> data_;
};

/// Windows `samples` (length frame_size) and writes its half spectrum.
void stft_frame(std::span<const double> samples, std::span<const double> window,
                std::span<std::complex<double>> out,
                OpCounter* counter = nullptr, Stage stage = Stage::Frontend);

/// Errors with "insufficient samples" when the clip is shorter than a frame.
Spectrogram stft(const AudioClip& clip, const StftConfig& config,
                 OpCounter* counter = nullptr, Stage stage = Stage::Frontend);

/// Overlap-add inverse. The window must satisfy constant overlap-add at the
/// configured hop (hop divides frame_size; Hann additionally needs hop <=
/// frame/2). Samples outside [frame - hop, frames * hop) are not fully
/// covered and do not reconstruct exactly.
AudioClip istft(const Spectrogram& spec);

/// E[t] = sum_k |X[t,k]|^2 over the stored half spectrum.
std::vector<double> frame_energy(const Spectrogram& spec, std::size_t channel);

/// Per-frame log-magnitude features log(|X[t,k]| + 1e-8), K values per frame.
std::vector<std::vector<double>> log_magnitude_features(
    const Spectrogram& spec, std::size_t channel);
std::vector<double> log_magnitude(std::span<const std::complex<double>> frame);

}  // namespace audioroi::dsp
