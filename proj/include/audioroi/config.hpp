// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "audioroi/roi.hpp"
#include "audioroi/ssl.hpp"
#include "audioroi/stft.hpp"
#include "audioroi/vad.hpp"

namespace audioroi::app {

struct VadSettings {
  vad::VadConfig config;
  /// Shape used to cost the VAD network when an oracle stands in for it.
  std::vector<std::size_t> hidden{64, 64};
};

struct MaskSettings {
  double threshold = 0.7;         // binarization of network outputs
  double oracle_threshold = 0.5;  // binarization of the oracle soft mask
  std::vector<std::size_t> hidden{256, 256};
};

struct SslSettings {
  ssl::GridDims grid;
  ssl::CameraModel camera;
  ssl::FrequencyBand band;
  double alpha = 0.2;
  double svd_delta = 1e-4;
  bool use_svd = true;
  std::vector<Eigen::Vector3d> mics = ssl::ArrayGeometry::square().mics();
};

struct SimSettings {
  double sample_rate = 16000.0;
  double gain_mean = 0.2;
  double gain_sigma = 0.05;
};

struct PipelineConfig {
  dsp::StftConfig stft;
  VadSettings vad;
  MaskSettings mask;
  SslSettings ssl;
  roi::RoiParams roi;
  SimSettings sim;

  double video_fps = 15.0;
  double detector_cost_per_pixel = 1000.0;
  /// Previous-frame face detection used when no ground truth is available.
  bool assume_face_detected = true;

  std::optional<std::filesystem::path> vad_weights;
  std::optional<std::filesystem::path> mask_weights;
  bool use_oracle_mask = false;
  bool bypass_vad = false;

  /// Checks every block and that referenced weight files exist.
  void validate() const;
};

/// Unknown keys are rejected. Relative weight paths resolve against `base`.
PipelineConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base = {});
nlohmann::json config_to_json(const PipelineConfig& config);

PipelineConfig load_config(const std::filesystem::path& path);

/// Config named by AUDIOROI_CONFIG, if that variable is set.
std::optional<PipelineConfig> load_config_from_env();

/// {"mics": [[x, y, z], ...]} in meters, camera frame.
std::vector<Eigen::Vector3d> load_geometry(const std::filesystem::path& path);

/// "9x7" -> {9, 7}.
ssl::GridDims parse_grid(std::string_view text);
/// "0.35:0.65" -> {0.35, 0.65}.
std::pair<double, double> parse_bounds(std::string_view text);

}  // namespace audioroi::app
