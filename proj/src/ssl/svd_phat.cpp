// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

#include "audioroi/ssl.hpp"

namespace audioroi::ssl {

SvdPhatModel::SvdPhatModel(const SteeringGrid& grid, double delta)
    : dims_(grid.dims()),
      num_pairs_(grid.num_pairs()),
      first_bin_(grid.first_bin()),
      last_bin_(grid.last_bin()),
      delta_(delta) {
  if (!(delta >= 0.0))
    throw std::invalid_argument("svd delta must be non-negative");

  const auto regions = static_cast<Eigen::Index>(grid.num_regions());
  const std::size_t band = grid.num_band_bins();
  const auto cols = static_cast<Eigen::Index>(2 * num_pairs_ * band);
  const double base = 2.0 * std::numbers::pi / static_cast<double>(grid.frame_size());

  steering_.resize(regions, cols);
  for (Eigen::Index q = 0; q < regions; ++q) {
    for (std::size_t p = 0; p < num_pairs_; ++p) {
      const double step = base * grid.tdoa(static_cast<std::size_t>(q), p);
      for (std::size_t b = 0; b < band; ++b) {
        const double theta = step * static_cast<double>(first_bin_ + b);
        const auto m = static_cast<Eigen::Index>(p * band + b);
        steering_(q, 2 * m) = std::cos(theta);
        steering_(q, 2 * m + 1) = -std::sin(theta);
      }
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(steering_,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  singular_values_ = svd.singularValues();
  const Eigen::Index n = singular_values_.size();

  // tail[r] = sum of squared singular values from index r on.
  std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
  for (Eigen::Index r = n - 1; r >= 0; --r)
    tail[r] = tail[r + 1] + singular_values_(r) * singular_values_(r);
  const double total = tail[0];
  if (!(total > 0.0)) throw std::invalid_argument("steering matrix is zero");

  Eigen::Index rank = n;
  for (Eigen::Index r = 1; r <= n; ++r) {
    if (std::sqrt(tail[r] / total) <= delta) {
      rank = r;
      break;
    }
  }
  reconstruction_error_ = std::sqrt(tail[rank] / total);

  left_ = svd.matrixU().leftCols(rank) *
          singular_values_.head(rank).asDiagonal();
  right_ = svd.matrixV().leftCols(rank).transpose();
}

Eigen::VectorXd SvdPhatModel::supervector(const CrossSpectrumState& state) const {
  if (state.num_pairs() != num_pairs_ || state.num_bins() <= last_bin_)
    throw std::invalid_argument("cross-spectrum state does not match model");
  const std::size_t band = last_bin_ - first_bin_ + 1;
  Eigen::VectorXd w(static_cast<Eigen::Index>(2 * num_pairs_ * band));
  for (std::size_t p = 0; p < num_pairs_; ++p) {
    for (std::size_t b = 0; b < band; ++b) {
      const auto m = static_cast<Eigen::Index>(p * band + b);
      const auto& x = state.at(p, first_bin_ + b);
      w(2 * m) = x.real();
      w(2 * m + 1) = x.imag();
    }
  }
  return w;
}

std::uint64_t SvdPhatModel::evaluation_flops() const {
  const auto r = static_cast<std::uint64_t>(rank());
  const auto m2 = static_cast<std::uint64_t>(right_.cols());
  const auto q = static_cast<std::uint64_t>(left_.rows());
  return 2 * r * m2 + 2 * q * r;
}

std::uint64_t SvdPhatModel::exact_flops() const {
  const std::size_t band = last_bin_ - first_bin_ + 1;
  return dims_.size() * num_pairs_ * (2 + 7 * band);
}

AcousticImage SvdPhatModel::evaluate(const CrossSpectrumState& state,
                                     OpCounter* counter, std::size_t frame) const {
  const Eigen::VectorXd projected = right_ * supervector(state);
  const Eigen::VectorXd e = left_ * projected;
  charge(counter, Stage::Ssl, evaluation_flops());
  return AcousticImage::from_energies(
      dims_, std::vector<double>(e.data(), e.data() + e.size()), frame);
}

SvdPhatModel build_svd_model(const SteeringGrid& grid, double delta) {
  return SvdPhatModel(grid, delta);
}

AcousticImage srp_phat_svd(const SvdPhatModel& model,
                           const CrossSpectrumState& state, OpCounter* counter,
                           std::size_t frame) {
  return model.evaluate(state, counter, frame);
}

}  // namespace audioroi::ssl
