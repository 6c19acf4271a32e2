// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/stft.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "audioroi/fft.hpp"

namespace audioroi::dsp {

void StftConfig::validate() const {
  if (frame_size == 0 || frame_size % 2 != 0)
    throw std::invalid_argument("frame_size must be positive and even");
  if (hop_size == 0 || hop_size > frame_size)
    throw std::invalid_argument("hop_size must satisfy 0 < hop <= frame_size");
}

std::vector<double> make_window(Window window, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (window == Window::Hann) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) /
                                  static_cast<double>(n));
  }
  return w;
}

std::size_t num_stft_frames(std::size_t length, const StftConfig& config) {
  if (length < config.frame_size) return 0;
  return 1 + (length - config.frame_size) / config.hop_size;
}

Spectrogram::Spectrogram(std::size_t channels, std::size_t frames,
                         StftConfig config, double sample_rate)
    : channels_(channels),
      frames_(frames),
      bins_(config.num_bins()),
      config_(config),
      sample_rate_(sample_rate),
      data_(channels * frames * bins_) {
  config_.validate();
  if (channels_ == 0)
    throw std::invalid_argument("spectrogram needs at least one channel");
}

std::span<std::complex<double>> Spectrogram::frame(std::size_t channel,
                                                   std::size_t t) {
  if (channel >= channels_ || t >= frames_)
    throw std::out_of_range("spectrogram frame index out of range");
  return {data_.data() + index(channel, t, 0), bins_};
}

std::span<const std::complex<double>> Spectrogram::frame(std::size_t channel,
                                                         std::size_t t) const {
  if (channel >= channels_ || t >= frames_)
    throw std::out_of_range("spectrogram frame index out of range");
  return {data_.data() + index(channel, t, 0), bins_};
}

bool Spectrogram::same_shape(const Spectrogram& other) const {
  return channels_ == other.channels_ && frames_ == other.frames_ &&
         bins_ == other.bins_ &&
         config_.frame_size == other.config_.frame_size &&
         config_.hop_size == other.config_.hop_size &&
         config_.window == other.config_.window;
}

void stft_frame(std::span<const double> samples, std::span<const double> window,
                std::span<std::complex<double>> out, OpCounter* counter,
                Stage stage) {
  const std::size_t n = window.size();
  if (samples.size() != n || out.size() != n / 2 + 1)
    throw std::invalid_argument("stft_frame: size mismatch");
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = samples[i] * window[i];
  rfft(buf, out);
  charge(counter, stage, flops::stft_frame(n));
}

Spectrogram stft(const AudioClip& clip, const StftConfig& config,
                 OpCounter* counter, Stage stage) {
  config.validate();
  if (clip.length() < config.frame_size)
    throw std::invalid_argument(
        "insufficient samples: clip has " + std::to_string(clip.length()) +
        ", frame needs " + std::to_string(config.frame_size));
  const std::size_t frames = num_stft_frames(clip.length(), config);
  Spectrogram spec(clip.num_channels(), frames, config, clip.sample_rate());
  const auto window = make_window(config.window, config.frame_size);
  for (std::size_t c = 0; c < clip.num_channels(); ++c) {
    auto x = clip.channel(c);
    for (std::size_t t = 0; t < frames; ++t)
      stft_frame(x.subspan(t * config.hop_size, config.frame_size), window,
                 spec.frame(c, t), counter, stage);
  }
  return spec;
}

AudioClip istft(const Spectrogram& spec) {
  const auto& cfg = spec.config();
  const std::size_t n = cfg.frame_size;
  const std::size_t hop = cfg.hop_size;
  if (n % hop != 0 || (cfg.window == Window::Hann && n / hop < 2))
    throw std::invalid_argument(
        "istft: window/hop combination is not overlap-add compatible");

  const auto window = make_window(cfg.window, n);
  // Constant overlap-add gain: sum of the window divided by the hop.
  const double ola_gain =
      std::accumulate(window.begin(), window.end(), 0.0) /
      static_cast<double>(hop);

  const std::size_t frames = spec.num_frames();
  const std::size_t length = frames == 0 ? 0 : (frames - 1) * hop + n;
  auto out = AudioClip::zeros(spec.num_channels(), length, spec.sample_rate());
  std::vector<double> buf(n);
  for (std::size_t c = 0; c < spec.num_channels(); ++c) {
    auto y = out.channel(c);
    for (std::size_t t = 0; t < frames; ++t) {
      irfft(spec.frame(c, t), buf);
      for (std::size_t i = 0; i < n; ++i) y[t * hop + i] += buf[i] / ola_gain;
    }
  }
  return out;
}

std::vector<double> frame_energy(const Spectrogram& spec, std::size_t channel) {
  if (channel >= spec.num_channels())
    throw std::out_of_range("frame_energy: channel out of range");
  std::vector<double> e(spec.num_frames(), 0.0);
  for (std::size_t t = 0; t < spec.num_frames(); ++t)
    for (const auto& v : spec.frame(channel, t)) e[t] += std::norm(v);
  return e;
}

std::vector<double> log_magnitude(std::span<const std::complex<double>> frame) {
  std::vector<double> out(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k)
    out[k] = std::log(std::abs(frame[k]) + 1e-8);
  return out;
}

std::vector<std::vector<double>> log_magnitude_features(
    const Spectrogram& spec, std::size_t channel) {
  std::vector<std::vector<double>> feats;
  feats.reserve(spec.num_frames());
  for (std::size_t t = 0; t < spec.num_frames(); ++t)
    feats.push_back(log_magnitude(spec.frame(channel, t)));
  return feats;
}

}  // namespace audioroi::dsp
