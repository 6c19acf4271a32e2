// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "audioroi/wav.hpp"

namespace audioroi::app {
namespace {

using nlohmann::json;

// Independent streams per purpose from one scenario seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SourceSpec source_from_json(const json& j, const std::filesystem::path& base,
                            bool is_noise) {
  SourceSpec s;
  int placements = 0;
  for (const auto& item : j.items()) {
    const auto& key = item.key();
    const auto& v = item.value();
    if (key == "region") {
      s.region = ssl::RegionIndex{v.at(0).get<std::size_t>(), v.at(1).get<std::size_t>()};
      ++placements;
    } else if (key == "pixel") {
      s.pixel = ssl::Pixel{v.at(0).get<double>(), v.at(1).get<double>()};
      ++placements;
    } else if (key == "direction") {
      s.direction = Eigen::Vector3d(v.at(0).get<double>(), v.at(1).get<double>(),
                                    v.at(2).get<double>());
      ++placements;
    } else if (key == "wav") {
      s.wav = base / v.get<std::string>();
    } else if (key == "kind" && is_noise) {
      s.kind = sim::parse_noise_kind(v.get<std::string>());
    } else {
      throw std::invalid_argument("unknown source key '" + key + "'");
    }
  }
  if (placements != 1)
    throw std::invalid_argument("a source needs exactly one of region, pixel, direction");
  return s;
}

json source_to_json(const SourceSpec& s, bool is_noise) {
  json j = json::object();
  if (s.region) j["region"] = {s.region->col, s.region->row};
  if (s.pixel) j["pixel"] = {s.pixel->x, s.pixel->y};
  if (s.direction) j["direction"] = {s.direction->x(), s.direction->y(), s.direction->z()};
  if (s.wav) j["wav"] = s.wav->string();
  if (is_noise) j["kind"] = std::string(sim::noise_kind_name(s.kind));
  return j;
}

std::vector<double> load_source_signal(const std::filesystem::path& path,
                                       std::size_t length, double sample_rate) {
  const auto clip = read_wav(path, sample_rate);
  if (clip.num_channels() != 1)
    throw std::runtime_error(path.string() + ": source wav must be mono");
  auto x = clip.channels().front();
  x.resize(length, 0.0);
  return x;
}

std::size_t to_samples(double seconds, double sample_rate) {
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::filesystem::path& base) {
  Scenario s;
  for (const auto& item : j.items()) {
    const auto& key = item.key();
    const auto& v = item.value();
    if (key == "seed") {
      s.seed = v.get<std::uint64_t>();
    } else if (key == "duration_s") {
      s.duration_s = v.get<double>();
    } else if (key == "snr_db") {
      s.snr_db = v.get<double>();
    } else if (key == "gain") {
      if (!v.is_null()) s.gain = v.get<double>();
    } else if (key == "roll") {
      s.voice_roll_s = v.value("voice_s", 0.0);
      s.noise_roll_s = v.value("noise_s", 0.0);
    } else if (key == "silence") {
      if (!v.is_null()) {
        s.silence_start_s = v.at("start_s").get<double>();
        s.silence_length_s = v.at("length_s").get<double>();
      }
    } else if (key == "rir") {
      s.rir_length_ms = v.value("length_ms", 0.0);
      s.rt60_s = v.value("rt60_s", 0.3);
    } else if (key == "voice") {
      if (!v.is_null()) s.voice = source_from_json(v, base, false);
    } else if (key == "noise") {
      if (!v.is_null()) s.noise = source_from_json(v, base, true);
    } else {
      throw std::invalid_argument("unknown scenario key '" + key + "'");
    }
  }
  if (!(s.duration_s > 0.0)) throw std::invalid_argument("duration_s must be > 0");
  if (s.voice_roll_s < 0.0 || s.noise_roll_s < 0.0)
    throw std::invalid_argument("roll must be >= 0");
  if (s.silence_start_s && (*s.silence_start_s < 0.0 || s.silence_length_s < 0.0))
    throw std::invalid_argument("silence start and length must be >= 0");
  if (s.rir_length_ms < 0.0) throw std::invalid_argument("rir length must be >= 0");
  if (s.gain && !(*s.gain > 0.0)) throw std::invalid_argument("gain must be > 0");
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j = {
      {"seed", s.seed},
      {"duration_s", s.duration_s},
      {"snr_db", s.snr_db},
      {"roll", {{"voice_s", s.voice_roll_s}, {"noise_s", s.noise_roll_s}}},
      {"rir", {{"length_ms", s.rir_length_ms}, {"rt60_s", s.rt60_s}}},
  };
  j["gain"] = s.gain ? json(*s.gain) : json(nullptr);
  if (s.silence_start_s)
    j["silence"] = {{"start_s", *s.silence_start_s}, {"length_s", s.silence_length_s}};
  j["voice"] = s.voice ? source_to_json(*s.voice, false) : json(nullptr);
  j["noise"] = s.noise ? source_to_json(*s.noise, true) : json(nullptr);
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open scenario");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return scenario_from_json(j, path.parent_path());
}

Eigen::Vector3d source_direction(const SourceSpec& source,
                                 const ssl::SteeringGrid& grid) {
  if (source.direction) {
    const double n = source.direction->norm();
    if (!(n > 0.0)) throw std::invalid_argument("source direction must be nonzero");
    return *source.direction / n;
  }
  if (source.pixel) return ssl::pixel_to_direction(grid.camera(), *source.pixel);
  if (source.region) {
    const auto d = grid.dims();
    if (source.region->col >= d.cols || source.region->row >= d.rows)
      throw std::out_of_range("source region outside the grid");
    return grid.direction(grid.region_index(*source.region));
  }
  throw std::invalid_argument("source has no placement");
}

SimulatedScene simulate(const Scenario& scenario, const PipelineConfig& config,
                        const ssl::SteeringGrid& grid) {
  const double fs = config.sim.sample_rate;
  const std::size_t length = to_samples(scenario.duration_s, fs);
  if (length < config.stft.frame_size)
    throw std::invalid_argument("scenario shorter than one STFT frame");
  const ssl::ArrayGeometry geometry(config.ssl.mics);

  sim::MixSpec spec;
  spec.snr_db = scenario.snr_db;
  spec.sample_rate = fs;
  spec.stft = config.stft;
  spec.vad = config.vad.config;
  spec.voice_roll = to_samples(scenario.voice_roll_s, fs) % length;
  spec.noise_roll = to_samples(scenario.noise_roll_s, fs) % length;
  spec.rir_length = to_samples(scenario.rir_length_ms / 1000.0, fs);
  spec.rt60_s = scenario.rt60_s;
  spec.rir_seed = derive_seed(scenario.seed, 3);
  if (scenario.silence_start_s) {
    spec.silence = sim::SilenceSpan{to_samples(*scenario.silence_start_s, fs),
                                    to_samples(scenario.silence_length_s, fs)};
  }
  if (scenario.gain) {
    spec.gain = *scenario.gain;
  } else {
    std::mt19937_64 rng(derive_seed(scenario.seed, 4));
    spec.gain = sim::draw_gain(rng, config.sim.gain_mean, config.sim.gain_sigma);
  }

  std::optional<ssl::Pixel> face;
  if (scenario.voice) {
    const auto& v = *scenario.voice;
    auto x = v.wav ? load_source_signal(*v.wav, length, fs)
                   : sim::synth_voice(length, fs, derive_seed(scenario.seed, 1));
    const auto dir = source_direction(v, grid);
    spec.voice.emplace(dir, AudioClip::mono(std::move(x), fs));
    if (dir.z() > 0.0) {
      const auto p = ssl::direction_to_pixel(grid.camera(), dir);
      const auto& cam = grid.camera();
      if (p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(cam.width) &&
          p.y <= static_cast<double>(cam.height))
        face = p;
    }
  }
  if (scenario.noise) {
    const auto& n = *scenario.noise;
    auto x = n.wav ? load_source_signal(*n.wav, length, fs)
                   : sim::synth_noise(n.kind, length, fs, derive_seed(scenario.seed, 2));
    spec.noise.emplace(source_direction(n, grid), AudioClip::mono(std::move(x), fs));
  }
  if (!spec.voice && !spec.noise)
    throw std::invalid_argument("scenario needs a voice or a noise source");

  return SimulatedScene{sim::mix(spec, geometry), face, spec.gain};
}

}  // namespace audioroi::app
