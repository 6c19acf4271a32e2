// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/vad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace audioroi::vad {

void VadConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("vad threshold must lie in (0, 1)");
  if (smoothing_window < 1)
    throw std::invalid_argument("vad smoothing window must be >= 1");
}

double first_quartile(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("quartile of empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = 0.25 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

VadLabelSequence make_vad_labels(std::span<const double> energies,
                                 const VadConfig& config) {
  config.validate();
  if (energies.empty())
    throw std::invalid_argument("make_vad_labels: empty energy sequence");

  const double q1 = first_quartile(energies);
  const std::size_t n = energies.size();
  const std::size_t w = config.smoothing_window;

  VadLabelSequence out;
  out.noisy.resize(n);
  out.desensitized.resize(n);
  out.final.resize(n);

  for (std::size_t t = 0; t < n; ++t) out.noisy[t] = energies[t] >= q1 ? 1 : 0;

  std::size_t running = 0;
  for (std::size_t t = 0; t < n; ++t) {
    running += out.noisy[t];
    if (t >= w) running -= out.noisy[t - w];
    const std::size_t covered = std::min(t + 1, w);
    out.desensitized[t] =
        static_cast<double>(running) / static_cast<double>(covered);
    out.final[t] = out.desensitized[t] >= 0.5 ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> gate(std::span<const double> scores,
                               const VadConfig& config) {
  config.validate();
  std::vector<std::uint8_t> active(scores.size());
  for (std::size_t t = 0; t < scores.size(); ++t)
    active[t] = scores[t] >= config.threshold ? 1 : 0;
  return active;
}

}  // namespace audioroi::vad
