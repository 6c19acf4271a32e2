// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace audioroi::vad {

struct VadConfig {
  double threshold = 0.3;
  std::size_t smoothing_window = 10;

  void validate() const;
};

/// Per-frame labels from the energy-quartile rule.
struct VadLabelSequence {
  std::vector<std::uint8_t> noisy;   // E[t] >= Q1
  std::vector<double> desensitized;  // trailing moving average of noisy
  std::vector<std::uint8_t> final;   // desensitized >= 0.5

  std::size_t size() const { return final.size(); }
};

/// First quartile with linear interpolation between order statistics
/// (position 0.25 (n - 1) in the sorted sample).
double first_quartile(std::span<const double> values);

/// Training-target labels from frame energies. The moving average at frame t
/// covers frames max(0, t - w + 1) .. t and divides by the number of frames
/// actually covered.
VadLabelSequence make_vad_labels(std::span<const double> energies,
                                 const VadConfig& config = {});

/// active[t] = scores[t] >= threshold.
std::vector<std::uint8_t> gate(std::span<const double> scores,
                               const VadConfig& config = {});

}  // namespace audioroi::vad
