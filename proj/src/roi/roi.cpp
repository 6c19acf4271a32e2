// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/roi.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace audioroi::roi {

void RoiParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(min_fraction > 0.0 && min_fraction <= max_fraction && max_fraction <= 1.0))
    throw std::invalid_argument("ROI bounds must satisfy 0 < min <= max <= 1");
  if (!(sds_threshold >= 0.0 && sds_threshold <= 1.0))
    throw std::invalid_argument("SDS threshold must lie in [0, 1]");
}

RoiState::RoiState(RoiParams params) : RoiState(params, params.max_fraction) {}

RoiState::RoiState(RoiParams params, double size_fraction)
    : params_(params), size_fraction_(size_fraction) {
  params_.validate();
  if (!(size_fraction_ >= params_.min_fraction &&
        size_fraction_ <= params_.max_fraction))
    throw std::invalid_argument("initial ROI fraction outside bounds");
}

double speech_dominance_score(const masking::TFMask& mask) {
  const auto& v = mask.values();
  if (v.empty()) throw std::invalid_argument("SDS of an empty mask");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

RoiState update_roi_size(const RoiState& state, double sds,
                         bool face_detected_prev) {
  if (!(sds >= 0.0 && sds <= 1.0))
    throw std::invalid_argument("SDS must lie in [0, 1]");
  const auto& p = state.params();
  RoiState next = state;
  const bool shrink = sds > p.sds_threshold && face_detected_prev;
  const double scaled =
      state.size_fraction() * (shrink ? 1.0 - p.beta : 1.0 + p.beta);
  next.size_fraction_ = std::clamp(scaled, p.min_fraction, p.max_fraction);
  next.last_face_detected_ = face_detected_prev;
  next.last_sds_ = sds;
  return next;
}

RoiBox make_roi(const ssl::SteeringGrid& grid, const ssl::AcousticImage& image,
                const RoiState& state) {
  if (image.energies.empty())
    throw std::invalid_argument("make_roi: empty acoustic image");
  const auto width = static_cast<double>(grid.camera().width);
  const auto height = static_cast<double>(grid.camera().height);
  const auto center = ssl::region_to_pixel(grid, image.argmax);

  RoiBox box;
  box.width = state.size_fraction() * width;
  box.height = state.size_fraction() * height;
  const double x0 = center.x - box.width / 2.0;
  const double y0 = center.y - box.height / 2.0;
  box.x = std::clamp(x0, 0.0, width - box.width);
  box.y = std::clamp(y0, 0.0, height - box.height);
  box.clipped = box.x != x0 || box.y != y0;
  return box;
}

double detector_cost_model(const RoiBox& box, double cost_per_pixel) {
  if (!(cost_per_pixel > 0.0))
    throw std::invalid_argument("detector cost per pixel must be positive");
  return box.area() * cost_per_pixel;
}

double detector_full_frame_cost(const ssl::CameraModel& camera,
                                double cost_per_pixel) {
  RoiBox full{0.0, 0.0, static_cast<double>(camera.width),
              static_cast<double>(camera.height), false};
  return detector_cost_model(full, cost_per_pixel);
}

}  // namespace audioroi::roi
