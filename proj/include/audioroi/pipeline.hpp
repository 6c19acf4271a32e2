// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "audioroi/audio.hpp"
#include "audioroi/config.hpp"
#include "audioroi/gru.hpp"
#include "audioroi/op_counter.hpp"
#include "audioroi/roi.hpp"
#include "audioroi/scenario.hpp"
#include "audioroi/ssl.hpp"

namespace audioroi::app {

/// Everything that is fixed for a configuration: geometry, steering grid,
/// SVD factors and loaded networks. Read-only once built, so one instance
/// can serve concurrent runs.
struct PipelineModels {
  ssl::ArrayGeometry geometry;
  ssl::SteeringGrid grid;
  std::optional<ssl::SvdPhatModel> svd;
  std::optional<nn::GruNetwork> vad_net;
  std::optional<nn::GruNetwork> mask_net;
};

PipelineModels build_models(const PipelineConfig& config);

struct PipelineInput {
  AudioClip mixture;
  /// Clean voice at the mixture's level; enables the oracle mask.
  std::optional<AudioClip> clean;
  /// Per-STFT-frame voice activity; stands in for the VAD network.
  std::optional<std::vector<std::uint8_t>> vad_truth;
  /// True face position; drives the simulated detector outcome.
  std::optional<ssl::Pixel> face_pixel;
};

PipelineInput input_from_scene(const SimulatedScene& scene);

/// The VAD always runs; bypass_vad only ignores its decision.
enum class VadSource { Network, Oracle, Energy };
enum class MaskSource { Network, Oracle, AllOnes };

std::string_view vad_source_name(VadSource s);
std::string_view mask_source_name(MaskSource s);

/// One video frame. Audio frames are assigned to the tick that contains
/// their last sample.
struct TickRecord {
  std::size_t tick = 0;
  std::size_t first_frame = 0;
  std::size_t num_frames = 0;
  bool active = false;
  double vad_score = 0.0;
  std::optional<double> sds;
  std::optional<ssl::AcousticImage> image;
  std::optional<roi::RoiBox> roi;
  double roi_fraction = 0.0;
  std::optional<bool> face_in_roi;
};

struct PipelineRun {
  std::vector<TickRecord> ticks;
  VadSource vad_source = VadSource::Energy;
  MaskSource mask_source = MaskSource::AllOnes;
  std::size_t num_frames = 0;
};

/// Streams the mixture through VAD gating, masking, SSL and ROI selection.
/// Every stage charges its analytic cost to `counter`; the detector is
/// charged for the ROI it would scan on each active tick.
PipelineRun run_pipeline(const PipelineConfig& config, const PipelineModels& models,
                         const PipelineInput& input, OpCounter* counter = nullptr);

/// {"frame", "x", "y", "w", "h", "sds", "argmax": [col, row], "active"};
/// ROI fields are null on inactive ticks.
nlohmann::json tick_to_json(const TickRecord& record);

}  // namespace audioroi::app
