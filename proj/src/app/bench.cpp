// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "audioroi/pipeline.hpp"
#include "audioroi/roi.hpp"

namespace audioroi::app {
namespace {

using nlohmann::json;

struct ScenarioOutcome {
  OpCounts counts;
  std::size_t frames = 0;
  std::size_t active = 0;
  std::size_t face_hits = 0;
  double fraction_sum = 0.0;
  double wall_ms = 0.0;
};

ScenarioOutcome run_one(const PipelineConfig& config, const PipelineModels& models,
                        const Scenario& scenario) {
  const auto scene = simulate(scenario, config, models.grid);
  const auto input = input_from_scene(scene);
  OpCounter counter;
  const auto start = std::chrono::steady_clock::now();
  const auto run = run_pipeline(config, models, input, &counter);
  const auto stop = std::chrono::steady_clock::now();

  ScenarioOutcome out;
  out.counts = counter.snapshot();
  out.frames = run.ticks.size();
  out.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  for (const auto& t : run.ticks) {
    if (!t.active) continue;
    ++out.active;
    out.fraction_sum += t.roi_fraction;
    if (t.face_in_roi.value_or(false)) ++out.face_hits;
  }
  return out;
}

template <typename F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

json counts_to_json(const OpCounts& c) {
  json j = json::object();
  for (auto s : kAllStages) j[std::string(stage_name(s))] = c[s];
  return j;
}

json stage_means_to_json(const std::array<double, kStageCount>& v) {
  json j = json::object();
  for (auto s : kAllStages)
    j[std::string(stage_name(s))] = v[static_cast<std::size_t>(s)];
  return j;
}

}  // namespace

std::vector<Scenario> bench_scenarios(const BenchOptions& options, double snr_db,
                                      const ssl::GridDims& grid) {
  std::vector<Scenario> out;
  out.reserve(options.scenarios_per_snr);
  for (std::size_t i = 0; i < options.scenarios_per_snr; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
    const std::size_t voice = pick(rng);
    std::size_t noise = pick(rng);
    while (grid.size() > 1 && noise == voice) noise = pick(rng);

    Scenario s;
    s.seed = rng();
    s.duration_s = options.duration_s;
    s.snr_db = snr_db;
    s.voice = SourceSpec{ssl::RegionIndex{voice % grid.cols, voice / grid.cols},
                         std::nullopt, std::nullopt, std::nullopt, sim::NoiseKind::White};
    s.noise = SourceSpec{ssl::RegionIndex{noise % grid.cols, noise / grid.cols},
                         std::nullopt, std::nullopt, std::nullopt, options.noise};
    out.push_back(std::move(s));
  }
  return out;
}

void derive_metrics(SnrResult& r, double baseline, bool include_pipeline_cost) {
  if (r.frames == 0) throw std::invalid_argument("bench result without frames");
  const double frames = static_cast<double>(r.frames);
  for (auto s : kAllStages)
    r.stage_flops_per_frame[static_cast<std::size_t>(s)] =
        static_cast<double>(r.raw[s]) / frames;
  r.pipeline_flops_per_frame = static_cast<double>(r.raw.pipeline_total()) / frames;
  r.detector_flops_per_frame = static_cast<double>(r.raw[Stage::Detector]) / frames;
  r.total_flops_per_frame =
      r.detector_flops_per_frame + (include_pipeline_cost ? r.pipeline_flops_per_frame : 0.0);
  r.reduction_factor = baseline / r.total_flops_per_frame;
  r.detector_only_factor = baseline / r.detector_flops_per_frame;
  r.mean_roi_fraction =
      r.active_frames ? r.roi_fraction_sum / static_cast<double>(r.active_frames) : 0.0;
  r.face_capture_rate =
      r.active_frames ? static_cast<double>(r.face_hits) / static_cast<double>(r.active_frames)
                      : 0.0;
}

BenchReport bench(const PipelineConfig& base, const BenchOptions& options) {
  if (options.snrs_db.empty()) throw std::invalid_argument("bench needs at least one SNR");
  if (options.scenarios_per_snr == 0)
    throw std::invalid_argument("bench needs at least one scenario per SNR");

  PipelineConfig config = base;
  config.bypass_vad = options.bypass_vad;
  if (!config.mask_weights) config.use_oracle_mask = true;
  if (options.pinned_fraction) {
    config.roi.min_fraction = *options.pinned_fraction;
    config.roi.max_fraction = *options.pinned_fraction;
  }
  const auto models = build_models(config);

  BenchReport report;
  report.options = options;
  report.baseline_flops_per_frame =
      roi::detector_full_frame_cost(config.ssl.camera, config.detector_cost_per_pixel);
  report.detector_only_bound = 1.0 / (config.roi.min_fraction * config.roi.min_fraction);

  for (double snr : options.snrs_db) {
    const auto scenarios = bench_scenarios(options, snr, config.ssl.grid);
    std::vector<ScenarioOutcome> outcomes(scenarios.size());
    parallel_for(scenarios.size(), options.threads, [&](std::size_t i) {
      outcomes[i] = run_one(config, models, scenarios[i]);
    });

    SnrResult r;
    r.snr_db = snr;
    r.scenarios = scenarios.size();
    double wall = 0.0;
    for (const auto& o : outcomes) {
      r.raw += o.counts;
      r.frames += o.frames;
      r.active_frames += o.active;
      r.face_hits += o.face_hits;
      r.roi_fraction_sum += o.fraction_sum;
      wall += o.wall_ms;
    }
    if (options.timing) r.wall_ms_per_frame = wall / static_cast<double>(r.frames);
    derive_metrics(r, report.baseline_flops_per_frame, options.include_pipeline_cost);
    report.results.push_back(r);
  }
  return report;
}

json report_to_json(const BenchReport& report) {
  const auto& o = report.options;
  json opts = {
      {"snrs_db", o.snrs_db},
      {"scenarios_per_snr", o.scenarios_per_snr},
      {"seed", o.seed},
      {"duration_s", o.duration_s},
      {"noise", std::string(sim::noise_kind_name(o.noise))},
      {"bypass_vad", o.bypass_vad},
      {"include_pipeline_cost", o.include_pipeline_cost},
      {"timing", o.timing},
  };
  opts["pinned_fraction"] = o.pinned_fraction ? json(*o.pinned_fraction) : json(nullptr);

  json results = json::array();
  for (const auto& r : report.results) {
    json j = {
        {"snr_db", r.snr_db},
        {"scenarios", r.scenarios},
        {"frames", r.frames},
        {"active_frames", r.active_frames},
        {"face_hits", r.face_hits},
        {"roi_fraction_sum", r.roi_fraction_sum},
        {"raw_flops", counts_to_json(r.raw)},
        {"flops_per_frame", stage_means_to_json(r.stage_flops_per_frame)},
        {"pipeline_flops_per_frame", r.pipeline_flops_per_frame},
        {"detector_flops_per_frame", r.detector_flops_per_frame},
        {"total_flops_per_frame", r.total_flops_per_frame},
        {"reduction_factor", r.reduction_factor},
        {"detector_only_factor", r.detector_only_factor},
        {"mean_roi_fraction", r.mean_roi_fraction},
        {"face_capture_rate", r.face_capture_rate},
    };
    if (r.wall_ms_per_frame) j["wall_ms_per_frame"] = *r.wall_ms_per_frame;
    results.push_back(std::move(j));
  }
  return {
      {"format", "audioroi-bench"},
      {"version", 1},
      {"options", opts},
      {"baseline_flops_per_frame", report.baseline_flops_per_frame},
      {"detector_only_bound", report.detector_only_bound},
      {"results", results},
  };
}

BenchReport report_from_json(const json& j) {
  if (j.value("format", "") != "audioroi-bench")
    throw std::invalid_argument("not a bench report");
  BenchReport report;
  const auto& o = j.at("options");
  report.options.snrs_db = o.at("snrs_db").get<std::vector<double>>();
  report.options.scenarios_per_snr = o.at("scenarios_per_snr").get<std::size_t>();
  report.options.seed = o.at("seed").get<std::uint64_t>();
  report.options.duration_s = o.at("duration_s").get<double>();
  report.options.noise = sim::parse_noise_kind(o.at("noise").get<std::string>());
  report.options.bypass_vad = o.at("bypass_vad").get<bool>();
  report.options.include_pipeline_cost = o.at("include_pipeline_cost").get<bool>();
  report.options.timing = o.at("timing").get<bool>();
  if (!o.at("pinned_fraction").is_null())
    report.options.pinned_fraction = o.at("pinned_fraction").get<double>();
  report.baseline_flops_per_frame = j.at("baseline_flops_per_frame").get<double>();
  report.detector_only_bound = j.at("detector_only_bound").get<double>();
  for (const auto& rj : j.at("results")) {
    SnrResult r;
    r.snr_db = rj.at("snr_db").get<double>();
    r.scenarios = rj.at("scenarios").get<std::size_t>();
    r.frames = rj.at("frames").get<std::size_t>();
    r.active_frames = rj.at("active_frames").get<std::size_t>();
    r.face_hits = rj.at("face_hits").get<std::size_t>();
    r.roi_fraction_sum = rj.at("roi_fraction_sum").get<double>();
    const auto& raw = rj.at("raw_flops");
    for (auto s : kAllStages)
      r.raw.flops[static_cast<std::size_t>(s)] =
          raw.at(std::string(stage_name(s))).get<std::uint64_t>();
    if (rj.contains("wall_ms_per_frame"))
      r.wall_ms_per_frame = rj.at("wall_ms_per_frame").get<double>();
    derive_metrics(r, report.baseline_flops_per_frame,
                   report.options.include_pipeline_cost);
    report.results.push_back(r);
  }
  return report;
}

std::string report_to_string(const BenchReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

}  // namespace audioroi::app
