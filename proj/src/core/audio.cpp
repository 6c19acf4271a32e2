// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/audio.hpp"

#include <stdexcept>
#include <string>

namespace audioroi {

AudioClip::AudioClip(std::vector<std::vector<double>> channels,
                     double sample_rate)
    : channels_(std::move(channels)), sample_rate_(sample_rate) {
  if (channels_.empty())
    throw std::invalid_argument("audio clip needs at least one channel");
  if (!(sample_rate_ > 0.0))
    throw std::invalid_argument("sample rate must be positive");
  for (const auto& ch : channels_) {
    if (ch.size() != channels_.front().size())
      throw std::invalid_argument("all channels must have equal length");
  }
}

AudioClip AudioClip::zeros(std::size_t channels, std::size_t length,
                           double sample_rate) {
  return AudioClip(
      std::vector<std::vector<double>>(channels, std::vector<double>(length)),
      sample_rate);
}

AudioClip AudioClip::mono(std::vector<double> samples, double sample_rate) {
  std::vector<std::vector<double>> chans;
  chans.push_back(std::move(samples));
  return AudioClip(std::move(chans), sample_rate);
}

std::span<const double> AudioClip::channel(std::size_t c) const {
  if (c >= channels_.size())
    throw std::out_of_range("channel " + std::to_string(c) + " out of range");
  return channels_[c];
}

std::span<double> AudioClip::channel(std::size_t c) {
  if (c >= channels_.size())
    throw std::out_of_range("channel " + std::to_string(c) + " out of range");
  return channels_[c];
}

double AudioClip::energy() const {
  double e = 0.0;
  for (const auto& ch : channels_)
    for (double v : ch) e += v * v;
  return e;
}

}  // namespace audioroi
