// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// audioroi command line: run, simulate, ess-measure, bench,
// render-acoustic-image.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "audioroi/bench.hpp"
#include "audioroi/config.hpp"
#include "audioroi/ess.hpp"
#include "audioroi/export.hpp"
#include "audioroi/pipeline.hpp"
#include "audioroi/scenario.hpp"
#include "audioroi/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace audioroi;

namespace {

// Flags shared by every subcommand that builds a pipeline.
struct Overrides {
  std::string config;
  std::optional<double> vad_threshold;
  std::string vad_weights;
  std::optional<double> mask_threshold;
  std::string mask_weights;
  bool oracle_mask = false;
  std::string grid;
  std::optional<double> svd_delta;
  bool exact_srp = false;
  std::optional<double> alpha;
  std::string geometry;
  std::optional<double> sds_threshold;
  std::optional<double> beta;
  std::string roi_bounds;
  bool bypass_vad = false;
  std::optional<double> fps;
  std::optional<double> detector_cost;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "pipeline config JSON (else $AUDIOROI_CONFIG)");
    app->add_option("--vad-threshold", vad_threshold, "VAD gate threshold");
    app->add_option("--vad-weights", vad_weights, "VAD network manifest");
    app->add_option("--mask-threshold", mask_threshold, "mask binarization threshold");
    app->add_option("--mask-weights", mask_weights, "mask network manifest");
    app->add_flag("--oracle-mask", oracle_mask, "use the oracle mask (needs clean audio)");
    app->add_option("--grid", grid, "steering grid, e.g. 9x7");
    app->add_option("--svd-delta", svd_delta, "SVD-PHAT relative error target");
    app->add_flag("--exact-srp", exact_srp, "evaluate SRP-PHAT directly instead of via SVD");
    app->add_option("--alpha", alpha, "cross-spectrum smoothing factor");
    app->add_option("--geometry", geometry, "microphone geometry JSON");
    app->add_option("--sds-threshold", sds_threshold, "ROI shrink threshold on SDS");
    app->add_option("--beta", beta, "ROI resize step");
    app->add_option("--roi-bounds", roi_bounds, "ROI fraction bounds, e.g. 0.35:0.65");
    app->add_flag("--bypass-vad", bypass_vad, "process every frame regardless of VAD");
    app->add_option("--fps", fps, "video frame rate");
    app->add_option("--detector-cost", detector_cost, "detector FLOPs per pixel");
  }

  app::PipelineConfig build() const {
    app::PipelineConfig c;
    if (!config.empty()) {
      c = app::load_config(config);
    } else if (auto env = app::load_config_from_env()) {
      c = *env;
    }
    if (vad_threshold) c.vad.config.threshold = *vad_threshold;
    if (!vad_weights.empty()) c.vad_weights = vad_weights;
    if (mask_threshold) c.mask.threshold = *mask_threshold;
    if (!mask_weights.empty()) c.mask_weights = mask_weights;
    if (oracle_mask) c.use_oracle_mask = true;
    if (!grid.empty()) c.ssl.grid = app::parse_grid(grid);
    if (svd_delta) c.ssl.svd_delta = *svd_delta;
    if (exact_srp) c.ssl.use_svd = false;
    if (alpha) c.ssl.alpha = *alpha;
    if (!geometry.empty()) c.ssl.mics = app::load_geometry(geometry);
    if (sds_threshold) c.roi.sds_threshold = *sds_threshold;
    if (beta) c.roi.beta = *beta;
    if (!roi_bounds.empty()) {
      const auto [lo, hi] = app::parse_bounds(roi_bounds);
      c.roi.min_fraction = lo;
      c.roi.max_fraction = hi;
    }
    if (bypass_vad) c.bypass_vad = true;
    if (fps) c.video_fps = *fps;
    if (detector_cost) c.detector_cost_per_pixel = *detector_cost;
    c.validate();
    return c;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

bool is_json(const fs::path& p) { return p.extension() == ".json"; }

// Loads `input` as a scenario (.json) or a multichannel recording.
app::PipelineInput load_input(const fs::path& input, const fs::path& clean,
                              const app::PipelineConfig& config,
                              const app::PipelineModels& models,
                              std::optional<std::uint64_t> seed) {
  if (is_json(input)) {
    auto scenario = app::load_scenario(input);
    if (seed) scenario.seed = *seed;
    return app::input_from_scene(app::simulate(scenario, config, models.grid));
  }
  app::PipelineInput in{read_wav(input, config.sim.sample_rate), std::nullopt,
                        std::nullopt, std::nullopt};
  if (!clean.empty()) in.clean = read_wav(clean, config.sim.sample_rate);
  return in;
}

int cmd_run(const Overrides& o, const std::string& input, const std::string& clean,
            const std::string& out, std::optional<std::uint64_t> seed) {
  const auto config = o.build();
  const auto models = app::build_models(config);
  const auto in = load_input(input, clean, config, models, seed);
  const auto run = app::run_pipeline(config, models, in, nullptr);
  std::string lines;
  for (const auto& t : run.ticks) lines += app::tick_to_json(t).dump() + "\n";
  if (out.empty() || out == "-") {
    std::cout << lines;
  } else {
    write_text(out, lines);
  }
  return 0;
}

int cmd_simulate(const Overrides& o, const std::string& scenario_path,
                 const std::string& out_dir, std::optional<std::uint64_t> seed) {
  const auto config = o.build();
  const ssl::ArrayGeometry geometry(config.ssl.mics);
  const auto grid = ssl::build_grid(geometry, config.ssl.camera, config.ssl.grid,
                                    config.sim.sample_rate, config.stft.frame_size,
                                    config.ssl.band);
  auto scenario = app::load_scenario(scenario_path);
  if (seed) scenario.seed = *seed;
  const auto scene = app::simulate(scenario, config, grid);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_wav(dir / "mixture.wav", scene.mix.mixture, SampleFormat::Float32);
  // At mixture level, so it can be passed straight to `run --clean`.
  write_wav(dir / "clean.wav", *app::input_from_scene(scene).clean, SampleFormat::Float32);
  json truth = {
      {"scenario", app::scenario_to_json(scenario)},
      {"gain", scene.gain},
      {"noise_scale", scene.mix.noise_scale},
      {"sample_rate", config.sim.sample_rate},
      {"vad", scene.mix.vad_truth.final},
  };
  if (scene.face_pixel) {
    truth["face_pixel"] = {scene.face_pixel->x, scene.face_pixel->y};
    const auto r = ssl::pixel_to_region(grid, *scene.face_pixel);
    truth["face_region"] = {r.col, r.row};
  } else {
    truth["face_pixel"] = nullptr;
    truth["face_region"] = nullptr;
  }
  write_text(dir / "truth.json", truth.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  double f_start = 20.0, f_end = 8000.0, duration = 10.0, tail = 3.0;
  double rate = 16000.0, amplitude = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--f-start", f_start, "start frequency (Hz)");
    app->add_option("--f-end", f_end, "end frequency (Hz)");
    app->add_option("--duration", duration, "sweep duration (s)");
    app->add_option("--tail", tail, "silent tail appended to the sweep (s)");
    app->add_option("--rate", rate, "sample rate (Hz)");
    app->add_option("--amplitude", amplitude, "peak amplitude");
  }
  ess::SweepSpec spec() const {
    ess::SweepSpec s{f_start, f_end, duration, tail, rate, amplitude};
    s.validate();
    return s;
  }
};

int cmd_ess_generate(const SweepArgs& a, const std::string& out) {
  const auto spec = a.spec();
  auto sweep = ess::generate_sweep(spec);
  auto x = sweep.channels().front();
  x.resize(spec.sweep_length() + spec.tail_length(), 0.0);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_wav(out, AudioClip::mono(std::move(x), spec.sample_rate), SampleFormat::Float32);
  return 0;
}

int cmd_ess_extract(const SweepArgs& a, const std::string& recording,
                    const std::string& out_dir, double length_ms,
                    const std::string& room, const std::string& position) {
  const auto spec = a.spec();
  const auto rec = read_wav(recording, spec.sample_rate);
  const auto length = static_cast<std::size_t>(std::llround(length_ms / 1000.0 * spec.sample_rate));
  const auto rirs = ess::extract_rir(rec, spec, length);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string prefix = room + "_" + position;
  json files = json::array();
  for (std::size_t c = 0; c < rirs.size(); ++c) {
    const std::string name = prefix + "_ch" + std::to_string(c) + ".wav";
    write_wav(dir / name, AudioClip::mono(rirs[c], spec.sample_rate), SampleFormat::Float32);
    files.push_back(name);
  }

  const auto manifest_path = dir / "manifest.json";
  json manifest = {{"format", "audioroi-rirs"}, {"version", 1}, {"entries", json::array()}};
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    in >> manifest;
  }
  auto& entries = manifest.at("entries");
  for (auto it = entries.begin(); it != entries.end();) {
    if (it->at("room") == room && it->at("position") == position)
      it = entries.erase(it);
    else
      ++it;
  }
  entries.push_back({{"room", room},
                     {"position", position},
                     {"recording", fs::path(recording).filename().string()},
                     {"sample_rate", spec.sample_rate},
                     {"length", length},
                     {"channels", files},
                     {"sweep",
                      {{"f_start", spec.f_start},
                       {"f_end", spec.f_end},
                       {"duration_s", spec.duration_s},
                       {"tail_s", spec.tail_s},
                       {"amplitude", spec.amplitude}}}});
  write_text(manifest_path, manifest.dump(2) + "\n");
  return 0;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_render(const Overrides& o, const std::string& csv, const std::string& input,
               std::optional<std::size_t> tick, const std::string& out,
               std::size_t cell) {
  if (csv.empty() == input.empty())
    throw std::invalid_argument("give exactly one of --csv or --input");
  if (!csv.empty()) {
    app::render_acoustic_image(app::read_acoustic_image_csv(csv), out, cell);
    return 0;
  }
  const auto config = o.build();
  const auto models = app::build_models(config);
  const auto in = load_input(input, {}, config, models, std::nullopt);
  const auto run = app::run_pipeline(config, models, in, nullptr);
  const app::TickRecord* chosen = nullptr;
  if (tick) {
    if (*tick >= run.ticks.size())
      throw std::out_of_range("tick " + std::to_string(*tick) + " beyond " +
                              std::to_string(run.ticks.size()) + " ticks");
    chosen = &run.ticks[*tick];
    if (!chosen->image)
      throw std::invalid_argument("tick " + std::to_string(*tick) + " is gated off");
  } else {
    for (const auto& t : run.ticks)
      if (t.image) chosen = &t;
    if (chosen == nullptr) throw std::invalid_argument("no active tick to render");
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  app::render_acoustic_image(*chosen->image, out, cell);
  return 0;
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"audioroi: acoustic speaker localization and ROI proposal"};
  cli.require_subcommand(1);

  Overrides run_o, sim_o, bench_o, render_o;
  std::optional<std::uint64_t> seed;

  auto* run = cli.add_subcommand("run", "stream a recording or scenario through the pipeline");
  std::string run_input, run_clean, run_out;
  run->add_option("input", run_input, "multichannel WAV or scenario JSON")->required();
  run->add_option("--clean", run_clean, "clean reference WAV for --oracle-mask");
  run->add_option("-o,--out", run_out, "JSON-lines output (default stdout)");
  run->add_option("--seed", seed, "override the scenario seed");
  run_o.attach(run);

  auto* simulate = cli.add_subcommand("simulate", "synthesize a scenario to WAV files");
  std::string sim_scenario, sim_out;
  simulate->add_option("scenario", sim_scenario, "scenario JSON")->required();
  simulate->add_option("-o,--out-dir", sim_out, "output directory")->required();
  simulate->add_option("--seed", seed, "override the scenario seed");
  sim_o.attach(simulate);

  auto* ess_cmd = cli.add_subcommand("ess-measure", "exponential sine sweep RIR measurement");
  ess_cmd->require_subcommand(1);
  SweepArgs gen_args, ext_args;
  auto* gen = ess_cmd->add_subcommand("generate", "write the excitation sweep");
  std::string gen_out;
  gen->add_option("-o,--out", gen_out, "sweep WAV")->required();
  gen_args.attach(gen);
  auto* ext = ess_cmd->add_subcommand("extract", "deconvolve a recorded sweep into RIRs");
  std::string ext_rec, ext_out, ext_room = "room", ext_pos = "pos0";
  double ext_len_ms = 500.0;
  ext->add_option("recording", ext_rec, "recorded sweep WAV")->required();
  ext->add_option("-o,--out-dir", ext_out, "output directory")->required();
  ext->add_option("--length-ms", ext_len_ms, "RIR length (ms)");
  ext->add_option("--room", ext_room, "room label for the manifest");
  ext->add_option("--position", ext_pos, "position label for the manifest");
  ext_args.attach(ext);

  auto* bench_cmd = cli.add_subcommand("bench", "FLOP benchmark against full-frame detection");
  app::BenchOptions bo;
  std::string bench_snrs = "35,20,10,0", bench_out, bench_noise = "white";
  std::optional<double> pin;
  bool gate = false, no_pipeline = false;
  bench_cmd->add_option("--snrs", bench_snrs, "comma-separated SNRs (dB)");
  bench_cmd->add_option("--scenarios", bo.scenarios_per_snr, "scenarios per SNR");
  bench_cmd->add_option("--seed", seed, "scenario seed");
  bench_cmd->add_option("--duration", bo.duration_s, "scenario length (s)");
  bench_cmd->add_option("--noise", bench_noise, "noise kind: white, pink, tonal");
  bench_cmd->add_option("--pin-fraction", pin, "fix the ROI fraction");
  bench_cmd->add_flag("--gate", gate, "honor VAD decisions instead of processing every frame");
  bench_cmd->add_flag("--no-pipeline-cost", no_pipeline, "count detector FLOPs only");
  bench_cmd->add_flag("--timing", bo.timing, "add wall time (reports stop being reproducible)");
  bench_cmd->add_option("--threads", bo.threads, "worker threads (0: all cores)");
  bench_cmd->add_option("-o,--out", bench_out, "report JSON (default stdout)");
  bench_o.attach(bench_cmd);

  auto* render = cli.add_subcommand("render-acoustic-image", "write an acoustic image as PGM and CSV");
  std::string render_csv, render_input, render_out;
  std::optional<std::size_t> render_tick;
  std::size_t render_cell = 1;
  render->add_option("--csv", render_csv, "image CSV to re-render");
  render->add_option("--input", render_input, "scenario JSON or WAV to run first");
  render->add_option("--tick", render_tick, "video frame to render (default: last active)");
  render->add_option("-o,--out", render_out, "output path; .pgm and .csv are written")->required();
  render->add_option("--cell", render_cell, "pixels per region");
  render_o.attach(render);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "audioroi: error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_o, run_input, run_clean, run_out, seed);
    if (simulate->parsed()) return cmd_simulate(sim_o, sim_scenario, sim_out, seed);
    if (gen->parsed()) return cmd_ess_generate(gen_args, gen_out);
    if (ext->parsed())
      return cmd_ess_extract(ext_args, ext_rec, ext_out, ext_len_ms, ext_room, ext_pos);
    if (bench_cmd->parsed()) {
      bo.snrs_db = parse_list(bench_snrs);
      if (seed) bo.seed = *seed;
      bo.noise = sim::parse_noise_kind(bench_noise);
      bo.pinned_fraction = pin;
      bo.bypass_vad = !gate;
      bo.include_pipeline_cost = !no_pipeline;
      const auto report = app::report_to_string(app::bench(bench_o.build(), bo));
      if (bench_out.empty() || bench_out == "-")
        std::cout << report;
      else
        write_text(bench_out, report);
      return 0;
    }
    if (render->parsed())
      return cmd_render(render_o, render_csv, render_input, render_tick, render_out,
                        render_cell);
  } catch (const std::exception& e) {
    std::cerr << "audioroi: error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}
