// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/ess.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "audioroi/fft.hpp"

namespace audioroi::ess {

void SweepSpec::validate() const {
  if (!(f_start > 0.0 && f_start < f_end))
    throw std::invalid_argument("sweep needs 0 < f_start < f_end");
  if (!(f_end <= sample_rate / 2.0))
    throw std::invalid_argument("sweep f_end exceeds the Nyquist frequency");
  if (!(duration_s > 0.0)) throw std::invalid_argument("sweep duration must be > 0");
  if (!(tail_s >= 0.0)) throw std::invalid_argument("sweep tail must be >= 0");
  if (!(amplitude > 0.0)) throw std::invalid_argument("sweep amplitude must be > 0");
}

std::size_t SweepSpec::sweep_length() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

std::size_t SweepSpec::tail_length() const {
  return static_cast<std::size_t>(std::llround(tail_s * sample_rate));
}

AudioClip generate_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sweep_length();
  const double rate = std::log(spec.f_end / spec.f_start);
  const double k = 2.0 * std::numbers::pi * spec.f_start * spec.duration_s / rate;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate;
    x[i] = spec.amplitude * std::sin(k * (std::exp(t * rate / spec.duration_s) - 1.0));
  }
  return AudioClip::mono(std::move(x), spec.sample_rate);
}

AudioClip inverse_filter(const SweepSpec& spec) {
  const auto sweep = generate_sweep(spec);
  const auto x = sweep.channel(0);
  const std::size_t n = x.size();
  const double rate = std::log(spec.f_end / spec.f_start);
  std::vector<double> inv(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / spec.sample_rate;
    const double env = std::exp(-t * rate / spec.duration_s);
    inv[j] = x[n - 1 - j] * env;
    // (sweep * inv)[n - 1] = sum_j inv[j] x[n - 1 - j]
    peak += inv[j] * x[n - 1 - j];
  }
  for (double& v : inv) v /= peak;
  return AudioClip::mono(std::move(inv), spec.sample_rate);
}

std::vector<std::vector<double>> extract_rir(const AudioClip& recording,
                                             const SweepSpec& spec,
                                             std::size_t rir_length) {
  spec.validate();
  const std::size_t need = spec.sweep_length() + spec.tail_length();
  if (recording.length() < need)
    throw std::invalid_argument(
        "recording too short: " + std::to_string(recording.length()) +
        " samples, sweep plus tail needs " + std::to_string(need));
  if (recording.sample_rate() != spec.sample_rate)
    throw std::invalid_argument("recording sample rate does not match sweep");
  if (rir_length == 0) throw std::invalid_argument("RIR length must be > 0");

  const auto inv = inverse_filter(spec);
  const std::size_t peak = spec.sweep_length() - 1;
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < recording.num_channels(); ++c) {
    auto full = dsp::fft_convolve(recording.channel(c), inv.channel(0));
    std::vector<double> h(rir_length, 0.0);
    for (std::size_t i = 0; i < rir_length && peak + i < full.size(); ++i)
      h[i] = full[peak + i];
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::vector<double>> extract_rir(const AudioClip& recording,
                                             const SweepSpec& spec) {
  return extract_rir(recording, spec,
                     static_cast<std::size_t>(std::llround(0.5 * spec.sample_rate)));
}

}  // namespace audioroi::ess
