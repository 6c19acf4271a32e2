// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace audioroi::app {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::string_view block,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object())
    throw std::invalid_argument("config block '" + std::string(block) +
                                "' must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known)
      throw std::invalid_argument("unknown config key '" + std::string(block) +
                                  "." + item.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<Eigen::Vector3d> mics_from_json(const json& j) {
  std::vector<Eigen::Vector3d> mics;
  for (const auto& m : j) {
    if (!m.is_array() || m.size() != 3)
      throw std::invalid_argument("each microphone needs [x, y, z]");
    mics.emplace_back(m[0].get<double>(), m[1].get<double>(), m[2].get<double>());
  }
  return mics;
}

std::string window_name(dsp::Window w) {
  return w == dsp::Window::Hann ? "hann" : "rect";
}

dsp::Window parse_window(const std::string& name) {
  if (name == "hann") return dsp::Window::Hann;
  if (name == "rect") return dsp::Window::Rect;
  throw std::invalid_argument("unknown window '" + name + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  stft.validate();
  vad.config.validate();
  if (!(mask.threshold > 0.0 && mask.threshold < 1.0) ||
      !(mask.oracle_threshold > 0.0 && mask.oracle_threshold < 1.0))
    throw std::invalid_argument("mask thresholds must lie in (0, 1)");
  ssl.camera.validate();
  if (ssl.grid.cols == 0 || ssl.grid.rows == 0)
    throw std::invalid_argument("grid must be at least 1x1");
  if (!(ssl.alpha > 0.0 && ssl.alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(ssl.svd_delta >= 0.0)) throw std::invalid_argument("svd delta must be >= 0");
  ssl::ArrayGeometry geometry(ssl.mics);  // throws on degenerate layouts
  roi.validate();
  if (!(sim.sample_rate > 0.0)) throw std::invalid_argument("sample rate must be > 0");
  if (!(sim.gain_mean > 0.0) || sim.gain_sigma < 0.0)
    throw std::invalid_argument("gain distribution needs mean > 0, sigma >= 0");
  if (!(video_fps > 0.0)) throw std::invalid_argument("video fps must be > 0");
  if (!(detector_cost_per_pixel > 0.0))
    throw std::invalid_argument("detector cost per pixel must be > 0");
  for (const auto* p : {&vad_weights, &mask_weights}) {
    if (*p && !std::filesystem::exists(**p))
      throw std::invalid_argument("weights file not found: " + (*p)->string());
  }
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base) {
  check_keys(j, "config",
             {"stft", "vad", "mask", "ssl", "roi", "sim", "video_fps",
              "detector_cost_per_pixel", "assume_face_detected", "vad_weights",
              "mask_weights", "use_oracle_mask", "bypass_vad"});
  PipelineConfig c;
  if (j.contains("stft")) {
    const auto& s = j["stft"];
    check_keys(s, "stft", {"frame_size", "hop_size", "window"});
    read(s, "frame_size", c.stft.frame_size);
    read(s, "hop_size", c.stft.hop_size);
    if (s.contains("window")) c.stft.window = parse_window(s["window"]);
  }
  if (j.contains("vad")) {
    const auto& v = j["vad"];
    check_keys(v, "vad", {"threshold", "smoothing_window", "hidden"});
    read(v, "threshold", c.vad.config.threshold);
    read(v, "smoothing_window", c.vad.config.smoothing_window);
    read(v, "hidden", c.vad.hidden);
  }
  if (j.contains("mask")) {
    const auto& m = j["mask"];
    check_keys(m, "mask", {"threshold", "oracle_threshold", "hidden"});
    read(m, "threshold", c.mask.threshold);
    read(m, "oracle_threshold", c.mask.oracle_threshold);
    read(m, "hidden", c.mask.hidden);
  }
  if (j.contains("ssl")) {
    const auto& s = j["ssl"];
    check_keys(s, "ssl",
               {"grid", "image_width", "image_height", "hfov_deg", "band_hz",
                "alpha", "svd_delta", "use_svd", "mics", "geometry"});
    if (s.contains("grid")) c.ssl.grid = parse_grid(s["grid"].get<std::string>());
    read(s, "image_width", c.ssl.camera.width);
    read(s, "image_height", c.ssl.camera.height);
    read(s, "hfov_deg", c.ssl.camera.hfov_deg);
    if (s.contains("band_hz")) {
      c.ssl.band.low_hz = s["band_hz"].at(0).get<double>();
      c.ssl.band.high_hz = s["band_hz"].at(1).get<double>();
    }
    read(s, "alpha", c.ssl.alpha);
    read(s, "svd_delta", c.ssl.svd_delta);
    read(s, "use_svd", c.ssl.use_svd);
    if (s.contains("mics")) c.ssl.mics = mics_from_json(s["mics"]);
    if (s.contains("geometry"))
      c.ssl.mics = load_geometry(base / s["geometry"].get<std::string>());
  }
  if (j.contains("roi")) {
    const auto& r = j["roi"];
    check_keys(r, "roi", {"sds_threshold", "beta", "min_fraction", "max_fraction"});
    read(r, "sds_threshold", c.roi.sds_threshold);
    read(r, "beta", c.roi.beta);
    read(r, "min_fraction", c.roi.min_fraction);
    read(r, "max_fraction", c.roi.max_fraction);
  }
  if (j.contains("sim")) {
    const auto& s = j["sim"];
    check_keys(s, "sim", {"sample_rate", "gain_mean", "gain_sigma"});
    read(s, "sample_rate", c.sim.sample_rate);
    read(s, "gain_mean", c.sim.gain_mean);
    read(s, "gain_sigma", c.sim.gain_sigma);
  }
  read(j, "video_fps", c.video_fps);
  read(j, "detector_cost_per_pixel", c.detector_cost_per_pixel);
  read(j, "assume_face_detected", c.assume_face_detected);
  read(j, "use_oracle_mask", c.use_oracle_mask);
  read(j, "bypass_vad", c.bypass_vad);
  if (j.contains("vad_weights") && !j["vad_weights"].is_null())
    c.vad_weights = base / j["vad_weights"].get<std::string>();
  if (j.contains("mask_weights") && !j["mask_weights"].is_null())
    c.mask_weights = base / j["mask_weights"].get<std::string>();
  return c;
}

json config_to_json(const PipelineConfig& c) {
  json mics = json::array();
  for (const auto& m : c.ssl.mics) mics.push_back({m.x(), m.y(), m.z()});
  json j = {
      {"stft",
       {{"frame_size", c.stft.frame_size},
        {"hop_size", c.stft.hop_size},
        {"window", window_name(c.stft.window)}}},
      {"vad",
       {{"threshold", c.vad.config.threshold},
        {"smoothing_window", c.vad.config.smoothing_window},
        {"hidden", c.vad.hidden}}},
      {"mask",
       {{"threshold", c.mask.threshold},
        {"oracle_threshold", c.mask.oracle_threshold},
        {"hidden", c.mask.hidden}}},
      {"ssl",
       {{"grid", std::to_string(c.ssl.grid.cols) + "x" + std::to_string(c.ssl.grid.rows)},
        {"image_width", c.ssl.camera.width},
        {"image_height", c.ssl.camera.height},
        {"hfov_deg", c.ssl.camera.hfov_deg},
        {"band_hz", {c.ssl.band.low_hz, c.ssl.band.high_hz}},
        {"alpha", c.ssl.alpha},
        {"svd_delta", c.ssl.svd_delta},
        {"use_svd", c.ssl.use_svd},
        {"mics", mics}}},
      {"roi",
       {{"sds_threshold", c.roi.sds_threshold},
        {"beta", c.roi.beta},
        {"min_fraction", c.roi.min_fraction},
        {"max_fraction", c.roi.max_fraction}}},
      {"sim",
       {{"sample_rate", c.sim.sample_rate},
        {"gain_mean", c.sim.gain_mean},
        {"gain_sigma", c.sim.gain_sigma}}},
      {"video_fps", c.video_fps},
      {"detector_cost_per_pixel", c.detector_cost_per_pixel},
      {"assume_face_detected", c.assume_face_detected},
      {"use_oracle_mask", c.use_oracle_mask},
      {"bypass_vad", c.bypass_vad},
  };
  j["vad_weights"] = c.vad_weights ? json(c.vad_weights->string()) : json(nullptr);
  j["mask_weights"] = c.mask_weights ? json(c.mask_weights->string()) : json(nullptr);
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open config");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::optional<PipelineConfig> load_config_from_env() {
  const char* env = std::getenv("AUDIOROI_CONFIG");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return load_config(env);
}

std::vector<Eigen::Vector3d> load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open geometry");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  auto mics = mics_from_json(j.at("mics"));
  ssl::ArrayGeometry check(mics);
  return mics;
}

ssl::GridDims parse_grid(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos)
    throw std::invalid_argument("grid must look like 9x7");
  try {
    const auto cols = std::stoul(std::string(text.substr(0, x)));
    const auto rows = std::stoul(std::string(text.substr(x + 1)));
    if (cols == 0 || rows == 0) throw std::invalid_argument("zero grid size");
    return {cols, rows};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("grid must look like 9x7, got '" +
                                std::string(text) + "'");
  }
}

std::pair<double, double> parse_bounds(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("bounds must look like 0.35:0.65");
  try {
    return {std::stod(std::string(text.substr(0, colon))),
            std::stod(std::string(text.substr(colon + 1)))};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bounds must look like 0.35:0.65, got '" +
                                std::string(text) + "'");
  }
}

}  // namespace audioroi::app
