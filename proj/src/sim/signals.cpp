// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "audioroi/sim.hpp"

namespace audioroi::sim {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

void normalize_rms(std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  if (e == 0.0) return;
  const double s = 1.0 / std::sqrt(e / static_cast<double>(x.size()));
  for (double& v : x) v *= s;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "white") return NoiseKind::White;
  if (name == "pink") return NoiseKind::Pink;
  if (name == "tonal") return NoiseKind::Tonal;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) +
                              "' (expected white, pink or tonal)");
}

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::White: return "white";
    case NoiseKind::Pink: return "pink";
    case NoiseKind::Tonal: return "tonal";
  }
  return "white";
}

void fractional_delay(std::span<const double> in, double delay,
                      std::span<double> out) {
  constexpr auto half = static_cast<long>(kFractionalDelayTaps / 2);
  constexpr double window_half = static_cast<double>(half) + 1.0;
  const auto n_in = static_cast<long>(in.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double center = static_cast<double>(n) - delay;
    const auto nearest = static_cast<long>(std::lround(center));
    double acc = 0.0;
    for (long i = nearest - half; i <= nearest + half; ++i) {
      if (i < 0 || i >= n_in) continue;
      const double tau = center - static_cast<double>(i);
      const double w = 0.5 * (1.0 + std::cos(kPi * tau / window_half));
      acc += in[static_cast<std::size_t>(i)] * sinc(tau) * w;
    }
    out[n] = acc;
  }
}

std::vector<std::vector<double>> synth_rir(const RirSpec& spec,
                                           std::uint64_t seed) {
  if (spec.length <= spec.direct_delay)
    throw std::invalid_argument("RIR length must exceed the direct delay");
  if (spec.channels == 0) throw std::invalid_argument("RIR needs >= 1 channel");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Amplitude falls by 10^-3 (60 dB) after rt60 seconds.
  const double decay_per_sample =
      spec.rt60_s > 0.0 ? std::log(1000.0) / (spec.rt60_s * spec.sample_rate)
                        : 0.0;
  std::vector<std::vector<double>> out(spec.channels,
                                       std::vector<double>(spec.length, 0.0));
  for (auto& h : out) {
    h[spec.direct_delay] = 1.0;
    if (spec.rt60_s <= 0.0) continue;
    for (std::size_t n = spec.direct_delay + 1; n < spec.length; ++n) {
      const double env = std::exp(-decay_per_sample *
                                  static_cast<double>(n - spec.direct_delay));
      h[n] = spec.tail_gain * env * gauss(rng);
    }
  }
  return out;
}

std::vector<double> synth_voice(std::size_t length, double sample_rate,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(length, 0.0);
  const double base_f0 = uniform(rng, 95.0, 230.0);
  const double nyquist = sample_rate / 2.0;

  auto pos = static_cast<std::size_t>(uniform(rng, 0.0, 0.05) * sample_rate);
  while (pos < length) {
    const auto dur = static_cast<std::size_t>(uniform(rng, 0.12, 0.30) * sample_rate);
    const auto gap = static_cast<std::size_t>(uniform(rng, 0.03, 0.12) * sample_rate);
    const double f0 = base_f0 * uniform(rng, 0.9, 1.1);
    const double glide = uniform(rng, -0.12, 0.05);
    const double formants[3] = {uniform(rng, 300.0, 800.0),
                                uniform(rng, 900.0, 2300.0),
                                uniform(rng, 2300.0, 3200.0)};
    const double widths[3] = {120.0, 180.0, 250.0};
    const double peaks[3] = {3.0, 2.0, 1.0};
    const double level = uniform(rng, 0.6, 1.0);

    double phase = uniform(rng, 0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < dur && pos + i < length; ++i) {
      const double tau = static_cast<double>(i) / static_cast<double>(dur);
      const double pitch = f0 * (1.0 + glide * tau);
      phase += 2.0 * kPi * pitch / sample_rate;
      const double env = level * std::sin(kPi * tau);
      double s = 0.0;
      for (int h = 1; h * pitch < nyquist * 0.95; ++h) {
        const double fh = h * pitch;
        double shape = 0.15;
        for (int f = 0; f < 3; ++f) {
          const double d = (fh - formants[f]) / widths[f];
          shape += peaks[f] * std::exp(-d * d);
        }
        s += shape / std::pow(static_cast<double>(h), 0.8) * std::sin(h * phase);
      }
      out[pos + i] = env * (s + 0.05 * gauss(rng));
    }
    pos += dur + gap;
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out) v *= 0.5 / peak;
  return out;
}

std::vector<double> synth_noise(NoiseKind kind, std::size_t length,
                                double sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(length, 0.0);
  switch (kind) {
    case NoiseKind::White:
      for (double& v : out) v = gauss(rng);
      break;
    case NoiseKind::Pink: {
      // Kellet's economy pinking filter.
      double b[7] = {};
      for (double& v : out) {
        const double w = gauss(rng);
        b[0] = 0.99886 * b[0] + w * 0.0555179;
        b[1] = 0.99332 * b[1] + w * 0.0750759;
        b[2] = 0.96900 * b[2] + w * 0.1538520;
        b[3] = 0.86650 * b[3] + w * 0.3104856;
        b[4] = 0.55000 * b[4] + w * 0.5329522;
        b[5] = -0.7616 * b[5] - w * 0.0168980;
        v = b[0] + b[1] + b[2] + b[3] + b[4] + b[5] + b[6] + w * 0.5362;
        b[6] = w * 0.115926;
      }
      break;
    }
    case NoiseKind::Tonal: {
      for (int voice = 0; voice < 2; ++voice) {
        std::size_t pos = 0;
        while (pos < length) {
          const auto dur = static_cast<std::size_t>(uniform(rng, 0.4, 0.8) * sample_rate);
          const double f = 110.0 * std::pow(2.0, std::floor(uniform(rng, 0.0, 36.0)) / 12.0);
          for (std::size_t i = 0; i < dur && pos + i < length; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            const double env = std::min(1.0, t / 0.02) * std::exp(-1.5 * t);
            double s = 0.0;
            for (int h = 1; h <= 6 && h * f < sample_rate / 2.0; ++h)
              s += std::sin(2.0 * kPi * h * f * t) / h;
            out[pos + i] += env * s;
          }
          pos += dur;
        }
      }
      break;
    }
  }
  normalize_rms(out);
  return out;
}

std::vector<double> roll(std::span<const double> x, std::size_t shift) {
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  shift %= x.size();
  for (std::size_t i = 0; i < x.size(); ++i) out[(i + shift) % x.size()] = x[i];
  return out;
}

}  // namespace audioroi::sim
