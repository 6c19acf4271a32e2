// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <Eigen/Dense>

#include "json.hpp"

#include "audioroi/config.hpp"
#include "audioroi/sim.hpp"
#include "audioroi/ssl.hpp"

namespace audioroi::app {

/// Where a source sits: exactly one of region, pixel or direction.
struct SourceSpec {
  std::optional<ssl::RegionIndex> region;
  std::optional<ssl::Pixel> pixel;
  std::optional<Eigen::Vector3d> direction;
  /// Mono wav to use instead of the synthetic signal.
  std::optional<std::filesystem::path> wav;
  sim::NoiseKind kind = sim::NoiseKind::White;  // noise sources only
};

struct Scenario {
  std::uint64_t seed = 1;
  double duration_s = 2.0;
  double snr_db = 20.0;
  std::optional<double> gain;  // drawn from the configured Gaussian if unset
  double voice_roll_s = 0.0;
  double noise_roll_s = 0.0;
  std::optional<double> silence_start_s;
  double silence_length_s = 0.0;
  double rir_length_ms = 0.0;  // 0: free field
  double rt60_s = 0.3;
  std::optional<SourceSpec> voice;
  std::optional<SourceSpec> noise;
};

Scenario scenario_from_json(const nlohmann::json& j,
                            const std::filesystem::path& base = {});
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

/// Unit direction of a source in the camera frame.
Eigen::Vector3d source_direction(const SourceSpec& source,
                                 const ssl::SteeringGrid& grid);

struct SimulatedScene {
  sim::MixResult mix;
  /// Pixel of the voice source (the face), when it projects into the image.
  std::optional<ssl::Pixel> face_pixel;
  double gain = 0.0;
};

/// Synthesizes the scenario at the configured sample rate.
SimulatedScene simulate(const Scenario& scenario, const PipelineConfig& config,
                        const ssl::SteeringGrid& grid);

}  // namespace audioroi::app
