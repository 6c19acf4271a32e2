// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "audioroi/gru.hpp"
#include "audioroi/op_counter.hpp"
#include "audioroi/stft.hpp"

namespace audioroi::masking {

/// Time-frequency mask with values in [0, 1], indexed [frame][bin].
class TFMask {
 public:
  /// Throws when a value falls outside [0, 1] or the size is not frames*bins.
  TFMask(std::size_t frames, std::size_t bins, std::vector<double> values,
         bool binary = false);

  static TFMask filled(std::size_t frames, std::size_t bins, double value);

  std::size_t num_frames() const { return frames_; }
  std::size_t num_bins() const { return bins_; }
  bool binary() const { return binary_; }
  double at(std::size_t t, std::size_t k) const { return values_[t * bins_ + k]; }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * bins_, bins_};
  }
  const std::vector<double>& values() const { return values_; }

  /// Frames [first, first + count) as a new mask.
  TFMask slice(std::size_t first, std::size_t count) const;

 private:
  std::size_t frames_;
  std::size_t bins_;
  std::vector<double> values_;
  bool binary_;
};

/// Phase-sensitive mask (|S|^2 / |X|^2) cos(angle S - angle X), clamped to
/// [0, 1]. Bins with |X| = 0 map to 0.
TFMask oracle_soft_mask(const dsp::Spectrogram& clean,
                        const dsp::Spectrogram& noisy, std::size_t channel);

/// Single-frame version used by the streaming pipeline.
void oracle_soft_mask_row(std::span<const std::complex<double>> clean,
                          std::span<const std::complex<double>> noisy,
                          std::span<double> out);

/// 1 where soft >= threshold, else 0.
TFMask binarize_mask(const TFMask& soft, double threshold);

/// Returns the selected channel scaled bin-by-bin by the mask (one channel).
dsp::Spectrogram apply_mask(const dsp::Spectrogram& noisy, const TFMask& mask,
                            std::size_t channel);

/// Network sigmoid outputs on log-magnitude features, unthresholded.
TFMask estimate_soft_mask(const nn::GruNetwork& net,
                          const dsp::Spectrogram& noisy, std::size_t channel,
                          OpCounter* counter = nullptr);

/// estimate_soft_mask followed by binarize_mask.
TFMask estimate_mask(const nn::GruNetwork& net, const dsp::Spectrogram& noisy,
                     std::size_t channel, double threshold,
                     OpCounter* counter = nullptr);

}  // namespace audioroi::masking
