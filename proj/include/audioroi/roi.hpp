// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>

#include "audioroi/mask.hpp"
#include "audioroi/ssl.hpp"

namespace audioroi::roi {

struct RoiParams {
  double sds_threshold = 0.3;
  double beta = 0.1;
  double min_fraction = 0.35;
  double max_fraction = 0.65;

  void validate() const;
};

/// ROI side length as a fraction of the image side, plus the inputs of the
/// last update.
class RoiState {
 public:
  /// Starts at params.max_fraction unless an initial fraction is given.
  explicit RoiState(RoiParams params = {});
  RoiState(RoiParams params, double size_fraction);

  double size_fraction() const { return size_fraction_; }
  bool last_face_detected() const { return last_face_detected_; }
  double last_sds() const { return last_sds_; }
  const RoiParams& params() const { return params_; }

 private:
  friend RoiState update_roi_size(const RoiState&, double, bool);

  RoiParams params_;
  double size_fraction_;
  bool last_face_detected_ = false;
  double last_sds_ = 0.0;
};

/// Mean of all mask values.
double speech_dominance_score(const masking::TFMask& mask);

/// Shrinks by (1 - beta) when sds > threshold and a face was detected in the
/// previous optical frame, otherwise grows by (1 + beta); then clamps to
/// [min_fraction, max_fraction].
RoiState update_roi_size(const RoiState& state, double sds,
                         bool face_detected_prev);

struct RoiBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
  bool clipped = false;

  double area() const { return width * height; }
  bool contains(ssl::Pixel p) const {
    return p.x >= x && p.x <= x + width && p.y >= y && p.y <= y + height;
  }
};

/// Box of (fraction * image width) x (fraction * image height) centered on
/// the argmax region's pixel center, translated to stay inside the image.
RoiBox make_roi(const ssl::SteeringGrid& grid, const ssl::AcousticImage& image,
                const RoiState& state);

/// Modeled detector FLOPs: scanned area times cost per pixel.
double detector_cost_model(const RoiBox& box, double cost_per_pixel);
double detector_full_frame_cost(const ssl::CameraModel& camera,
                                double cost_per_pixel);

}  // namespace audioroi::roi
