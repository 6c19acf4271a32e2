// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "audioroi/ssl.hpp"

namespace audioroi::ssl {

ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector3d> mics)
    : mics_(std::move(mics)) {
  if (mics_.size() < 2)
    throw std::invalid_argument("array geometry needs at least 2 microphones");
  for (std::size_t i = 0; i < mics_.size(); ++i) {
    for (std::size_t j = i + 1; j < mics_.size(); ++j) {
      if ((mics_[i] - mics_[j]).norm() < 1e-9)
        throw std::invalid_argument("degenerate geometry: microphones " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      pairs_.emplace_back(i, j);
    }
  }
}

ArrayGeometry ArrayGeometry::square(double side) {
  const double h = side / 2.0;
  return ArrayGeometry({{-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}});
}

double ArrayGeometry::max_spacing() const {
  double best = 0.0;
  for (auto [i, j] : pairs_) best = std::max(best, (mics_[i] - mics_[j]).norm());
  return best;
}

void CameraModel::validate() const {
  if (width == 0 || height == 0)
    throw std::invalid_argument("camera image must be non-empty");
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
    throw std::invalid_argument("horizontal FOV must lie in (0, 180) degrees");
}

double CameraModel::focal_px() const {
  const double half = hfov_deg * std::numbers::pi / 360.0;
  return (static_cast<double>(width) / 2.0) / std::tan(half);
}

Eigen::Vector3d pixel_to_direction(const CameraModel& camera, Pixel p) {
  const double f = camera.focal_px();
  Eigen::Vector3d d((p.x - static_cast<double>(camera.width) / 2.0) / f,
                    (p.y - static_cast<double>(camera.height) / 2.0) / f, 1.0);
  return d.normalized();
}

Pixel direction_to_pixel(const CameraModel& camera, const Eigen::Vector3d& dir) {
  if (!(dir.z() > 0.0))
    throw std::invalid_argument("direction does not face the camera");
  const double f = camera.focal_px();
  return {static_cast<double>(camera.width) / 2.0 + f * dir.x() / dir.z(),
          static_cast<double>(camera.height) / 2.0 + f * dir.y() / dir.z()};
}

double pair_tdoa_samples(const ArrayGeometry& geometry, std::size_t i,
                         std::size_t j, const Eigen::Vector3d& direction,
                         double sample_rate) {
  const auto& m = geometry.mics();
  return (m[j] - m[i]).dot(direction) / kSpeedOfSound * sample_rate;
}

SteeringGrid::SteeringGrid(const ArrayGeometry& geometry, CameraModel camera,
                           GridDims dims, double sample_rate,
                           std::size_t frame_size, FrequencyBand band)
    : camera_(camera),
      dims_(dims),
      pairs_(geometry.pairs()),
      sample_rate_(sample_rate),
      frame_size_(frame_size) {
  camera_.validate();
  if (dims_.cols == 0 || dims_.rows == 0)
    throw std::invalid_argument("grid must be at least 1x1");
  if (!(sample_rate_ > 0.0) || frame_size_ == 0 || frame_size_ % 2 != 0)
    throw std::invalid_argument("invalid sample rate or frame size for grid");
  if (!(band.low_hz >= 0.0 && band.high_hz > band.low_hz))
    throw std::invalid_argument("invalid beamformer frequency band");

  const double bin_hz = sample_rate_ / static_cast<double>(frame_size_);
  first_bin_ = static_cast<std::size_t>(std::ceil(band.low_hz / bin_hz));
  last_bin_ = std::min(static_cast<std::size_t>(std::floor(band.high_hz / bin_hz)),
                       frame_size_ / 2);
  if (first_bin_ > last_bin_)
    throw std::invalid_argument("beamformer band contains no STFT bins");

  directions_.reserve(num_regions());
  tdoas_.reserve(num_regions() * pairs_.size());
  for (std::size_t q = 0; q < num_regions(); ++q) {
    const auto d = pixel_to_direction(camera_, region_to_pixel(*this, region_at(q)));
    directions_.push_back(d);
    for (auto [i, j] : pairs_)
      tdoas_.push_back(pair_tdoa_samples(geometry, i, j, d, sample_rate_));
  }
}

std::size_t SteeringGrid::region_index(RegionIndex r) const {
  if (r.col >= dims_.cols || r.row >= dims_.rows)
    throw std::out_of_range("region (" + std::to_string(r.col) + "," +
                            std::to_string(r.row) + ") outside grid");
  return r.row * dims_.cols + r.col;
}

RegionIndex SteeringGrid::region_at(std::size_t index) const {
  if (index >= num_regions()) throw std::out_of_range("region index out of range");
  return {index % dims_.cols, index / dims_.cols};
}

SteeringGrid build_grid(const ArrayGeometry& geometry, const CameraModel& camera,
                        GridDims dims, double sample_rate, std::size_t frame_size,
                        FrequencyBand band) {
  return SteeringGrid(geometry, camera, dims, sample_rate, frame_size, band);
}

Pixel region_to_pixel(const SteeringGrid& grid, RegionIndex region) {
  const auto dims = grid.dims();
  if (region.col >= dims.cols || region.row >= dims.rows)
    throw std::out_of_range("region (" + std::to_string(region.col) + "," +
                            std::to_string(region.row) + ") outside grid");
  const double cw = static_cast<double>(grid.camera().width) /
                    static_cast<double>(dims.cols);
  const double ch = static_cast<double>(grid.camera().height) /
                    static_cast<double>(dims.rows);
  return {(static_cast<double>(region.col) + 0.5) * cw,
          (static_cast<double>(region.row) + 0.5) * ch};
}

RegionIndex pixel_to_region(const SteeringGrid& grid, Pixel p) {
  const auto dims = grid.dims();
  const double cw = static_cast<double>(grid.camera().width) /
                    static_cast<double>(dims.cols);
  const double ch = static_cast<double>(grid.camera().height) /
                    static_cast<double>(dims.rows);
  const auto clamp_index = [](double v, std::size_t n) {
    if (!(v > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(v), n - 1);
  };
  return {clamp_index(p.x / cw, dims.cols), clamp_index(p.y / ch, dims.rows)};
}

}  // namespace audioroi::ssl
