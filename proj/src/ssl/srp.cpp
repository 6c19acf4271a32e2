// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "audioroi/ssl.hpp"

namespace audioroi::ssl {

CrossSpectrumState::CrossSpectrumState(
    std::vector<std::pair<std::size_t, std::size_t>> pairs, std::size_t bins,
    double alpha)
    : pairs_(std::move(pairs)),
      bins_(bins),
      alpha_(alpha),
      values_(pairs_.size() * bins) {
  if (!(alpha_ > 0.0 && alpha_ <= 1.0))
    throw std::invalid_argument("adaptive rate alpha must lie in (0, 1]");
  if (pairs_.empty() || bins_ == 0)
    throw std::invalid_argument("cross-spectrum state needs pairs and bins");
}

void CrossSpectrumState::update(const dsp::Spectrogram& spec, std::size_t t,
                                std::span<const double> mask,
                                OpCounter* counter) {
  if (spec.num_bins() != bins_)
    throw std::invalid_argument("cross-spectrum bin count mismatch");
  if (!mask.empty() && mask.size() != bins_)
    throw std::invalid_argument("mask row length does not match bins");

  std::size_t mics = 0;
  for (auto [i, j] : pairs_) mics = std::max({mics, i + 1, j + 1});
  if (mics > spec.num_channels())
    throw std::invalid_argument("spectrogram has fewer channels than the array");

  std::vector<std::vector<double>> mag(mics, std::vector<double>(bins_));
  for (std::size_t m = 0; m < mics; ++m) {
    auto row = spec.frame(m, t);
    for (std::size_t k = 0; k < bins_; ++k) mag[m][k] = std::abs(row[k]);
  }

  const double keep = 1.0 - alpha_;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [i, j] = pairs_[p];
    auto xi = spec.frame(i, t);
    auto xj = spec.frame(j, t);
    for (std::size_t k = 0; k < bins_; ++k) {
      const double denom = mag[i][k] * mag[j][k];
      const double weight = mask.empty() ? 1.0 : mask[k];
      std::complex<double> inst{0.0, 0.0};
      if (denom > 0.0) inst = xi[k] * std::conj(xj[k]) / denom;
      auto& v = values_[p * bins_ + k];
      v = keep * v + alpha_ * weight * inst;
    }
  }
  // |X| per mic-bin: 4; per pair-bin: product 6, denominator 1, divide 2,
  // mask 2, alpha 2, decay 2, sum 2.
  charge(counter, Stage::Ssl, 4 * mics * bins_ + 17 * pairs_.size() * bins_);
}

AcousticImage AcousticImage::from_energies(GridDims dims,
                                           std::vector<double> energies,
                                           std::size_t frame) {
  if (energies.size() != dims.size() || energies.empty())
    throw std::invalid_argument("acoustic image size does not match grid");
  std::size_t best = 0;
  for (std::size_t q = 1; q < energies.size(); ++q)
    if (energies[q] > energies[best]) best = q;
  return {dims, std::move(energies), {best % dims.cols, best / dims.cols}, frame};
}

std::uint64_t exact_srp_flops(const SteeringGrid& grid) {
  return grid.num_regions() * grid.num_pairs() * (2 + 7 * grid.num_band_bins());
}

AcousticImage srp_phat_exact(const CrossSpectrumState& state,
                             const SteeringGrid& grid, OpCounter* counter,
                             std::size_t frame) {
  if (state.num_pairs() != grid.num_pairs() ||
      state.num_bins() != grid.frame_size() / 2 + 1)
    throw std::invalid_argument("cross-spectrum state does not match grid");

  const double base = 2.0 * std::numbers::pi / static_cast<double>(grid.frame_size());
  std::vector<double> energies(grid.num_regions(), 0.0);
  for (std::size_t q = 0; q < grid.num_regions(); ++q) {
    double e = 0.0;
    for (std::size_t p = 0; p < grid.num_pairs(); ++p) {
      const double step = base * grid.tdoa(q, p);
      for (std::size_t k = grid.first_bin(); k <= grid.last_bin(); ++k) {
        const double theta = step * static_cast<double>(k);
        const auto& x = state.at(p, k);
        e += x.real() * std::cos(theta) - x.imag() * std::sin(theta);
      }
    }
    energies[q] = e;
  }
  charge(counter, Stage::Ssl, exact_srp_flops(grid));
  return AcousticImage::from_energies(grid.dims(), std::move(energies), frame);
}

}  // namespace audioroi::ssl
