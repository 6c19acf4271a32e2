// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

#include "audioroi/bench.hpp"
#include "audioroi/config.hpp"
#include "audioroi/export.hpp"
#include "audioroi/pipeline.hpp"
#include "audioroi/scenario.hpp"

using namespace audioroi;
using namespace audioroi::app;
using nlohmann::json;

namespace {

SourceSpec at_region(ssl::RegionIndex r) {
  SourceSpec s;
  s.region = r;
  return s;
}

Scenario voice_at(ssl::RegionIndex region, double snr_db, std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  s.snr_db = snr_db;
  s.voice = at_region(region);
  s.noise = at_region({7, 1});
  return s;
}

PipelineRun run_scenario(const PipelineConfig& cfg, const Scenario& s, OpCounter* counter) {
  const auto models = build_models(cfg);
  const auto scene = simulate(s, cfg, models.grid);
  return run_pipeline(cfg, models, input_from_scene(scene), counter);
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("config parsing") {
  PipelineConfig cfg;
  cfg.roi.beta = 0.2;
  cfg.ssl.grid = {5, 4};
  cfg.ssl.svd_delta = 1e-3;
  cfg.video_fps = 10.0;
  cfg.bypass_vad = true;
  const auto back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));
  CHECK(back.roi.beta == 0.2);
  CHECK(back.ssl.grid.cols == 5);
  CHECK(back.bypass_vad);

  CHECK_THROWS(config_from_json(json{{"colour", 1}}));
  CHECK_THROWS(config_from_json(json{{"roi", {{"betta", 0.1}}}}));
  CHECK_THROWS(config_from_json(json{{"roi", {{"beta", 1.5}}}}).validate());
  CHECK_THROWS(config_from_json(json{{"vad_weights", "/nonexistent/vad.bin"}}).validate());

  const auto g = parse_grid("9x7");
  CHECK(g.cols == 9);
  CHECK(g.rows == 7);
  CHECK_THROWS(parse_grid("9by7"));
  CHECK_THROWS(parse_grid("0x7"));
  const auto [lo, hi] = parse_bounds("0.35:0.65");
  CHECK(lo == 0.35);
  CHECK(hi == 0.65);
  CHECK_THROWS(parse_bounds("0.35"));

  const auto dir = testing::scratch_dir("config");
  std::ofstream(dir / "geo.json") << R"({"mics":[[0,0,0],[0.1,0,0],[0,0.1,0]]})";
  CHECK(load_geometry(dir / "geo.json").size() == 3);
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), std::runtime_error);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), std::runtime_error);
}

TEST_CASE("scenario parsing") {
  const auto j = json::parse(R"({"seed":4,"duration_s":1.5,"snr_db":3,
    "silence":{"start_s":0.2,"length_s":0.3},"rir":{"length_ms":100,"rt60_s":0.4},
    "voice":{"region":[2,3]},"noise":{"pixel":[100,50],"kind":"pink"}})");
  const auto s = scenario_from_json(j);
  CHECK(s.seed == 4);
  CHECK(s.voice->region == ssl::RegionIndex{2, 3});
  CHECK(s.noise->kind == sim::NoiseKind::Pink);
  CHECK(*s.silence_start_s == 0.2);
  CHECK(scenario_to_json(scenario_from_json(scenario_to_json(s))) == scenario_to_json(s));

  CHECK_THROWS(scenario_from_json(json{{"voice", {{"region", {1, 1}}, {"pixel", {3, 3}}}}}));
  CHECK_THROWS(scenario_from_json(json{{"voice", json::object()}}));
  CHECK_THROWS(scenario_from_json(json{{"duration_s", 0}}));
  CHECK_THROWS(scenario_from_json(json{{"loudness", 2}}));

  const PipelineConfig cfg;
  const auto models = build_models(cfg);
  const auto scene = simulate(s, cfg, models.grid);
  CHECK(scene.mix.mixture.num_channels() == 4);
  CHECK(scene.mix.mixture.length() == 24000);
  REQUIRE(scene.face_pixel);
  CHECK(ssl::pixel_to_region(models.grid, *scene.face_pixel) == ssl::RegionIndex{2, 3});
  CHECK(simulate(s, cfg, models.grid).mix.mixture.channels() == scene.mix.mixture.channels());
  auto other = s;
  other.seed = 5;
  CHECK(simulate(other, cfg, models.grid).mix.mixture.channels() != scene.mix.mixture.channels());
}

TEST_CASE("pipeline follows a talker") {
  PipelineConfig cfg;
  cfg.use_oracle_mask = true;
  auto s = voice_at({2, 3}, 20.0, 9);
  s.noise.reset();
  const auto models = build_models(cfg);
  const auto target = ssl::region_to_pixel(models.grid, {2, 3});
  const auto run = run_scenario(cfg, s, nullptr);
  CHECK(run.ticks.size() == 30);
  CHECK(run.vad_source == VadSource::Oracle);
  CHECK(run.mask_source == MaskSource::Oracle);
  std::size_t emitted = 0, hits = 0;
  for (const auto& t : run.ticks) {
    if (!t.roi) continue;
    ++emitted;
    hits += t.roi->contains(target);
  }
  REQUIRE(emitted > 0);
  CHECK(hits >= 0.9 * emitted);
}

TEST_CASE("gating keeps downstream stages idle on noise") {
  PipelineConfig cfg;
  cfg.use_oracle_mask = true;
  Scenario s;
  s.noise = at_region({1, 1});
  OpCounter c;
  const auto run = run_scenario(cfg, s, &c);
  CHECK(run.vad_source == VadSource::Oracle);
  for (const auto& t : run.ticks) CHECK_FALSE(t.active);
  CHECK(c.get(Stage::Ssl) == 0);
  CHECK(c.get(Stage::Roi) == 0);
  CHECK(c.get(Stage::Mask) == 0);
  CHECK(c.get(Stage::Detector) == 0);
  CHECK(c.get(Stage::Frontend) > 0);
  CHECK(c.get(Stage::Vad) > 0);
}

TEST_CASE("bypass and gating costs") {
  PipelineConfig cfg;
  cfg.use_oracle_mask = true;
  auto s = voice_at({5, 2}, 10.0, 12);
  s.silence_start_s = 0.5;
  s.silence_length_s = 0.8;
  OpCounter gated;
  const auto a = run_scenario(cfg, s, &gated);
  cfg.bypass_vad = true;
  OpCounter bypass;
  const auto b = run_scenario(cfg, s, &bypass);
  std::size_t inactive = 0;
  for (const auto& t : a.ticks) inactive += !t.active;
  CHECK(inactive > 0);
  for (const auto& t : b.ticks) {
    CHECK(t.active);
    CHECK(t.roi.has_value());
  }
  CHECK(gated.total() <= bypass.total());
  for (auto st : kAllStages) CHECK(gated.get(st) <= bypass.get(st));

  const auto j = tick_to_json(b.ticks.front());
  for (const char* k : {"frame", "x", "y", "w", "h", "sds", "argmax", "active"}) CHECK(j.contains(k));
  for (const auto& t : a.ticks)
    if (!t.active) CHECK(tick_to_json(t)["x"].is_null());
}

TEST_CASE("pipeline is deterministic and rejects bad input") {
  PipelineConfig cfg;
  const auto s = voice_at({4, 4}, 5.0, 3);
  OpCounter c1, c2;
  const auto r1 = run_scenario(cfg, s, &c1);
  const auto r2 = run_scenario(cfg, s, &c2);
  CHECK(r1.mask_source == MaskSource::AllOnes);
  CHECK(c1.snapshot().flops == c2.snapshot().flops);
  REQUIRE(r1.ticks.size() == r2.ticks.size());
  for (std::size_t i = 0; i < r1.ticks.size(); ++i) CHECK(tick_to_json(r1.ticks[i]) == tick_to_json(r2.ticks[i]));

  const auto models = build_models(cfg);
  auto input = input_from_scene(simulate(s, cfg, models.grid));
  input.mixture.channel(2)[5000] = std::numeric_limits<double>::quiet_NaN();
  try {
    run_pipeline(cfg, models, input);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("channel 2") != std::string::npos);
    CHECK(std::string(e.what()).find("frame 19") != std::string::npos);
  }
  input = input_from_scene(simulate(s, cfg, models.grid));
  input.mixture = AudioClip::zeros(3, 16000, 16000.0);
  CHECK_THROWS(run_pipeline(cfg, models, input));
  input.mixture = AudioClip::zeros(4, 100, 16000.0);
  CHECK_THROWS(run_pipeline(cfg, models, input));
  cfg.use_oracle_mask = true;
  input = input_from_scene(simulate(s, cfg, models.grid));
  input.clean.reset();
  CHECK_THROWS(run_pipeline(cfg, models, input));
}

TEST_CASE("bench bounds with a pinned box") {
  PipelineConfig cfg;
  BenchOptions opt;
  opt.snrs_db = {20.0};
  opt.scenarios_per_snr = 2;
  opt.duration_s = 1.0;
  opt.include_pipeline_cost = false;
  opt.pinned_fraction = 0.65;
  auto r = bench(cfg, opt);
  CHECK(r.results[0].reduction_factor == doctest::Approx(1.0 / 0.4225).epsilon(1e-3));
  opt.pinned_fraction = 0.35;
  r = bench(cfg, opt);
  CHECK(r.results[0].reduction_factor == doctest::Approx(1.0 / 0.1225).epsilon(1e-3));
  CHECK(r.detector_only_bound == doctest::Approx(1.0 / 0.1225));
}

TEST_CASE("bench report") {
  PipelineConfig cfg;
  BenchOptions opt;
  opt.snrs_db = {35.0, 0.0};
  opt.scenarios_per_snr = 2;
  opt.duration_s = 1.0;
  const auto r = bench(cfg, opt);
  REQUIRE(r.results.size() == 2);
  for (const auto& s : r.results) {
    CHECK(s.reduction_factor > 1.0);
    CHECK(s.reduction_factor <= r.detector_only_bound);
    CHECK(s.detector_only_factor >= s.reduction_factor);
    CHECK(s.mean_roi_fraction >= 0.35);
    CHECK(s.mean_roi_fraction <= 0.65 + 1e-12);
    CHECK(s.raw[Stage::Detector] > 0);
  }
  const auto text = report_to_string(r);
  CHECK(report_to_string(report_from_json(json::parse(text))) == text);
  CHECK(report_to_string(bench(cfg, opt)) == text);
  auto tampered = json::parse(text);
  tampered["results"][0]["reduction_factor"] = 100.0;
  CHECK(report_to_string(report_from_json(tampered)) == text);

  const auto sc = bench_scenarios(opt, 10.0, cfg.ssl.grid);
  CHECK(sc.size() == 2);
  CHECK(scenario_to_json(sc[0]) != scenario_to_json(sc[1]));
  const auto sc0 = bench_scenarios(opt, 0.0, cfg.ssl.grid);
  CHECK(sc0[0].voice->region == sc[0].voice->region);
  CHECK(sc0[0].snr_db == 0.0);
}

TEST_CASE("acoustic image export") {
  const auto flat = ssl::AcousticImage::from_energies({3, 2}, {2, 2, 2, 2, 2, 2});
  for (auto v : acoustic_image_gray(flat)) CHECK(v == 0);
  const auto hot = ssl::AcousticImage::from_energies({3, 2}, {-1, -1, 4, -1, -1, -1});
  const auto g = acoustic_image_gray(hot);
  CHECK(g[2] == 255);
  CHECK(g[0] == 0);

  const auto img = ssl::AcousticImage::from_energies({4, 3}, {0.1, -2.5e-7, 3.14159265358979, 1e300, 0, 7, 8, 9, -10, 11, 12.5, 1.0 / 3.0});
  const auto back = parse_acoustic_image_csv(acoustic_image_csv(img));
  CHECK(back.dims.cols == 4);
  CHECK(back.dims.rows == 3);
  CHECK(back.energies == img.energies);
  CHECK(back.argmax == img.argmax);
  CHECK_THROWS(parse_acoustic_image_csv("1,2\n3\n"));

  const auto dir = testing::scratch_dir("export");
  render_acoustic_image(img, dir / "img.pgm", 4);
  std::ifstream a(dir / "img.pgm", std::ios::binary);
  const std::string first((std::istreambuf_iterator<char>(a)), {});
  CHECK(first.rfind("P5\n16 12\n255\n", 0) == 0);
  CHECK(first.size() == std::string("P5\n16 12\n255\n").size() + 16 * 12);
  CHECK(read_acoustic_image_csv(dir / "img.csv").energies == img.energies);
  render_acoustic_image(img, dir / "img", 4);
  std::ifstream b(dir / "img.pgm", std::ios::binary);
  CHECK(std::string((std::istreambuf_iterator<char>(b)), {}) == first);
  CHECK_THROWS_AS(render_acoustic_image(img, "/nonexistent/dir/img.pgm"), std::runtime_error);
}

}  // TEST_SUITE
