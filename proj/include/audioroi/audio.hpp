// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace audioroi {

/// Multichannel real-valued audio. All channels share one length.
class AudioClip {
 public:
  AudioClip(std::vector<std::vector<double>> channels, double sample_rate);

  static AudioClip zeros(std::size_t channels, std::size_t length,
                         double sample_rate);
  static AudioClip mono(std::vector<double> samples, double sample_rate);

  std::size_t num_channels() const { return channels_.size(); }
  std::size_t length() const { return channels_.front().size(); }
  double sample_rate() const { return sample_rate_; }

  std::span<const double> channel(std::size_t c) const;
  std::span<double> channel(std::size_t c);

  const std::vector<std::vector<double>>& channels() const {
    return channels_;
  }

  /// Sum of squared samples over all channels.
  double energy() const;

 private:
  std::vector<std::vector<double>> channels_;
  double sample_rate_;
};

}  // namespace audioroi
