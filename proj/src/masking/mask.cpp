// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/mask.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace audioroi::masking {

TFMask::TFMask(std::size_t frames, std::size_t bins, std::vector<double> values,
               bool binary)
    : frames_(frames), bins_(bins), values_(std::move(values)), binary_(binary) {
  if (values_.size() != frames_ * bins_)
    throw std::invalid_argument("mask size does not match frames x bins");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("mask value outside [0, 1]");
    if (binary_ && v != 0.0 && v != 1.0)
      throw std::invalid_argument("binary mask holds a non-binary value");
  }
}

TFMask TFMask::filled(std::size_t frames, std::size_t bins, double value) {
  const bool binary = value == 0.0 || value == 1.0;
  return TFMask(frames, bins, std::vector<double>(frames * bins, value), binary);
}

TFMask TFMask::slice(std::size_t first, std::size_t count) const {
  if (first + count > frames_) throw std::out_of_range("mask slice out of range");
  std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first * bins_),
                        values_.begin() +
                            static_cast<std::ptrdiff_t>((first + count) * bins_));
  return TFMask(count, bins_, std::move(v), binary_);
}

void oracle_soft_mask_row(std::span<const std::complex<double>> clean,
                          std::span<const std::complex<double>> noisy,
                          std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double noisy_power = std::norm(noisy[k]);
    if (noisy_power == 0.0) {
      out[k] = 0.0;
      continue;
    }
    const double ratio = std::norm(clean[k]) / noisy_power;
    const double m = ratio * std::cos(std::arg(clean[k]) - std::arg(noisy[k]));
    out[k] = std::clamp(m, 0.0, 1.0);
  }
}

TFMask oracle_soft_mask(const dsp::Spectrogram& clean,
                        const dsp::Spectrogram& noisy, std::size_t channel) {
  if (!clean.same_shape(noisy))
    throw std::invalid_argument("oracle_soft_mask: spectrogram shape mismatch");
  const std::size_t frames = noisy.num_frames();
  const std::size_t bins = noisy.num_bins();
  std::vector<double> values(frames * bins);
  for (std::size_t t = 0; t < frames; ++t)
    oracle_soft_mask_row(clean.frame(channel, t), noisy.frame(channel, t),
                         std::span<double>(values.data() + t * bins, bins));
  return TFMask(frames, bins, std::move(values));
}

TFMask binarize_mask(const TFMask& soft, double threshold) {
  std::vector<double> values(soft.values().size());
  std::transform(soft.values().begin(), soft.values().end(), values.begin(),
                 [&](double v) { return v >= threshold ? 1.0 : 0.0; });
  return TFMask(soft.num_frames(), soft.num_bins(), std::move(values), true);
}

dsp::Spectrogram apply_mask(const dsp::Spectrogram& noisy, const TFMask& mask,
                            std::size_t channel) {
  if (mask.num_frames() != noisy.num_frames() ||
      mask.num_bins() != noisy.num_bins())
    throw std::invalid_argument("apply_mask: mask shape does not match");
  if (channel >= noisy.num_channels())
    throw std::out_of_range("apply_mask: channel out of range");
  dsp::Spectrogram out(1, noisy.num_frames(), noisy.config(),
                       noisy.sample_rate());
  for (std::size_t t = 0; t < noisy.num_frames(); ++t) {
    auto src = noisy.frame(channel, t);
    auto dst = out.frame(0, t);
    for (std::size_t k = 0; k < noisy.num_bins(); ++k)
      dst[k] = mask.at(t, k) * src[k];
  }
  return out;
}

TFMask estimate_soft_mask(const nn::GruNetwork& net,
                          const dsp::Spectrogram& noisy, std::size_t channel,
                          OpCounter* counter) {
  const std::size_t bins = noisy.num_bins();
  if (net.output_size() != bins)
    throw std::invalid_argument("mask network outputs " +
                                std::to_string(net.output_size()) +
                                " values, spectrogram has " +
                                std::to_string(bins) + " bins");
  const auto feats = dsp::log_magnitude_features(noisy, channel);
  charge(counter, Stage::Mask, flops::log_magnitude(bins) * noisy.num_frames());
  const auto scores = nn::gru_forward(net, feats, counter, Stage::Mask);
  std::vector<double> values;
  values.reserve(noisy.num_frames() * bins);
  for (const auto& row : scores) values.insert(values.end(), row.begin(), row.end());
  return TFMask(noisy.num_frames(), bins, std::move(values));
}

TFMask estimate_mask(const nn::GruNetwork& net, const dsp::Spectrogram& noisy,
                     std::size_t channel, double threshold, OpCounter* counter) {
  return binarize_mask(estimate_soft_mask(net, noisy, channel, counter),
                       threshold);
}

}  // namespace audioroi::masking
