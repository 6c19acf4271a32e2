// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "audioroi/config.hpp"
#include "audioroi/op_counter.hpp"
#include "audioroi/scenario.hpp"
#include "audioroi/sim.hpp"

namespace audioroi::app {

struct BenchOptions {
  std::vector<double> snrs_db{35.0, 20.0, 10.0, 0.0};
  std::size_t scenarios_per_snr = 8;
  std::uint64_t seed = 1;
  double duration_s = 2.0;
  sim::NoiseKind noise = sim::NoiseKind::White;
  /// Process every tick regardless of the VAD decision.
  bool bypass_vad = true;
  /// Count pipeline FLOPs in the modeled total; off leaves the detector alone.
  bool include_pipeline_cost = true;
  /// Fixes the ROI fraction (min = max) when set.
  std::optional<double> pinned_fraction;
  /// Adds wall time per frame; reports are then no longer reproducible.
  bool timing = false;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Paired scenario set: scenario i has the same sources and seeds at every SNR.
std::vector<Scenario> bench_scenarios(const BenchOptions& options, double snr_db,
                                      const ssl::GridDims& grid);

struct SnrResult {
  double snr_db = 0.0;
  std::size_t scenarios = 0;
  std::size_t frames = 0;  // video ticks
  std::size_t active_frames = 0;
  std::size_t face_hits = 0;
  double roi_fraction_sum = 0.0;
  OpCounts raw;
  std::optional<double> wall_ms_per_frame;

  // Derived from the fields above and the baseline.
  std::array<double, kStageCount> stage_flops_per_frame{};
  double pipeline_flops_per_frame = 0.0;
  double detector_flops_per_frame = 0.0;
  double total_flops_per_frame = 0.0;
  double reduction_factor = 0.0;
  double detector_only_factor = 0.0;
  double mean_roi_fraction = 0.0;
  double face_capture_rate = 0.0;
};

struct BenchReport {
  BenchOptions options;
  double baseline_flops_per_frame = 0.0;
  double detector_only_bound = 0.0;  // 1 / min_fraction^2
  std::vector<SnrResult> results;
};

/// Fills the derived fields of `r` from its raw counters.
void derive_metrics(SnrResult& r, double baseline_flops_per_frame,
                    bool include_pipeline_cost);

BenchReport bench(const PipelineConfig& config, const BenchOptions& options);

nlohmann::json report_to_json(const BenchReport& report);
/// Rebuilds a report from the stored raw counters of its JSON form.
BenchReport report_from_json(const nlohmann::json& j);
std::string report_to_string(const BenchReport& report);

}  // namespace audioroi::app
