// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "audioroi/mask.hpp"
#include "audioroi/stft.hpp"
#include "audioroi/vad.hpp"

namespace audioroi::app {
namespace {

void check_network(const nn::GruNetwork& net, std::size_t in, std::size_t out,
                   const char* what) {
  if (net.input_size() != in || net.output_size() != out)
    throw std::invalid_argument(std::string(what) + " network is " +
                                std::to_string(net.input_size()) + " -> " +
                                std::to_string(net.output_size()) + ", expected " +
                                std::to_string(in) + " -> " + std::to_string(out));
}

}  // namespace

PipelineModels build_models(const PipelineConfig& config) {
  config.validate();
  ssl::ArrayGeometry geometry(config.ssl.mics);
  auto grid = ssl::build_grid(geometry, config.ssl.camera, config.ssl.grid,
                              config.sim.sample_rate, config.stft.frame_size,
                              config.ssl.band);
  PipelineModels m{std::move(geometry), std::move(grid), std::nullopt,
                   std::nullopt, std::nullopt};
  if (config.ssl.use_svd) m.svd = ssl::build_svd_model(m.grid, config.ssl.svd_delta);
  const std::size_t bins = config.stft.num_bins();
  if (config.vad_weights) {
    m.vad_net = nn::load_gru(*config.vad_weights);
    check_network(*m.vad_net, bins, 1, "VAD");
  }
  if (config.mask_weights) {
    m.mask_net = nn::load_gru(*config.mask_weights);
    check_network(*m.mask_net, bins, bins, "mask");
  }
  return m;
}

PipelineInput input_from_scene(const SimulatedScene& scene) {
  auto clean = scene.mix.clean_reference.channels();
  for (auto& ch : clean)
    for (auto& x : ch) x *= scene.gain;
  return PipelineInput{scene.mix.mixture,
                       AudioClip(std::move(clean), scene.mix.mixture.sample_rate()),
                       scene.mix.vad_truth.final, scene.face_pixel};
}

std::string_view vad_source_name(VadSource s) {
  switch (s) {
    case VadSource::Network: return "network";
    case VadSource::Oracle: return "oracle";
    case VadSource::Energy: return "energy";
  }
  return "?";
}

std::string_view mask_source_name(MaskSource s) {
  switch (s) {
    case MaskSource::Network: return "network";
    case MaskSource::Oracle: return "oracle";
    case MaskSource::AllOnes: return "ones";
  }
  return "?";
}

PipelineRun run_pipeline(const PipelineConfig& config, const PipelineModels& models,
                         const PipelineInput& input, OpCounter* counter) {
  const auto& mixture = input.mixture;
  const double fs = mixture.sample_rate();
  if (fs != models.grid.sample_rate())
    throw std::invalid_argument("mixture sample rate " + std::to_string(fs) +
                                " does not match the configured " +
                                std::to_string(models.grid.sample_rate()));
  const std::size_t channels = models.geometry.num_mics();
  if (mixture.num_channels() != channels)
    throw std::invalid_argument("mixture has " + std::to_string(mixture.num_channels()) +
                                " channels, array has " + std::to_string(channels));

  const auto& stft_cfg = config.stft;
  const std::size_t n = stft_cfg.frame_size;
  const std::size_t hop = stft_cfg.hop_size;
  const std::size_t bins = stft_cfg.num_bins();
  const std::size_t frames = num_stft_frames(mixture.length(), stft_cfg);
  if (frames == 0) throw std::invalid_argument("insufficient samples for one STFT frame");
  const auto window = dsp::make_window(stft_cfg.window, n);

  PipelineRun run;
  run.num_frames = frames;
  if (models.vad_net) {
    run.vad_source = VadSource::Network;
  } else if (input.vad_truth) {
    if (input.vad_truth->size() != frames)
      throw std::invalid_argument("VAD truth length does not match the frame count");
    run.vad_source = VadSource::Oracle;
  } else {
    run.vad_source = VadSource::Energy;
  }
  if (config.use_oracle_mask) {
    if (!input.clean) throw std::invalid_argument("oracle mask needs a clean reference");
    if (input.clean->length() != mixture.length() || input.clean->num_channels() == 0)
      throw std::invalid_argument("clean reference does not match the mixture");
    run.mask_source = MaskSource::Oracle;
  } else if (models.mask_net) {
    run.mask_source = MaskSource::Network;
  } else {
    run.mask_source = MaskSource::AllOnes;
  }

  for (std::size_t c = 0; c < channels; ++c) {
    const auto x = mixture.channel(c);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]))
        throw std::invalid_argument("non-finite sample in channel " + std::to_string(c) +
                                    " at frame " + std::to_string(i / hop));
    }
  }

  // Reference-channel STFT runs for every frame regardless of gating.
  dsp::Spectrogram spec(channels, frames, stft_cfg, fs);
  for (std::size_t t = 0; t < frames; ++t)
    dsp::stft_frame(mixture.channel(0).subspan(t * hop, n), window, spec.frame(0, t),
                    counter, Stage::Frontend);

  const std::uint64_t vad_stand_in_cost =
      nn::gru_step_flops(bins, config.vad.hidden, 1) + flops::log_magnitude(bins);
  const std::uint64_t mask_stand_in_cost =
      nn::gru_step_flops(bins, config.mask.hidden, bins) + flops::log_magnitude(bins);

  std::vector<double> frame_scores(frames, 0.0);
  switch (run.vad_source) {
    case VadSource::Network: {
      nn::GruStream stream(*models.vad_net);
      for (std::size_t t = 0; t < frames; ++t) {
        const auto feats = dsp::log_magnitude(spec.frame(0, t));
        charge(counter, Stage::Vad, flops::log_magnitude(bins));
        frame_scores[t] = stream.step(feats, counter, Stage::Vad).front();
      }
      break;
    }
    case VadSource::Oracle:
      for (std::size_t t = 0; t < frames; ++t) {
        frame_scores[t] = (*input.vad_truth)[t];
        charge(counter, Stage::Vad, vad_stand_in_cost);
      }
      break;
    case VadSource::Energy: {
      const auto labels = vad::make_vad_labels(dsp::frame_energy(spec, 0), config.vad.config);
      for (std::size_t t = 0; t < frames; ++t) {
        frame_scores[t] = labels.final[t];
        charge(counter, Stage::Vad, vad_stand_in_cost);
      }
      break;
    }
  }

  std::optional<nn::GruStream> mask_stream;
  if (run.mask_source == MaskSource::Network) mask_stream.emplace(*models.mask_net);
  const double binarize_at = run.mask_source == MaskSource::Oracle
                                 ? config.mask.oracle_threshold
                                 : config.mask.threshold;

  const double ticks_per_sample = config.video_fps / fs;
  const auto num_ticks = static_cast<std::size_t>(
      std::floor(static_cast<double>(mixture.length()) * ticks_per_sample));
  auto tick_of = [&](std::size_t t) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(t * hop + n - 1) * ticks_per_sample));
  };

  ssl::CrossSpectrumState cross(models.geometry.pairs(), bins, config.ssl.alpha);
  roi::RoiState roi_state(config.roi);
  roi::RoiBox prev_box;
  bool have_prev = false;
  std::vector<std::complex<double>> clean_frame(bins);
  std::vector<double> soft(bins), binary(bins);

  std::size_t t = 0;
  run.ticks.reserve(num_ticks);
  for (std::size_t j = 0; j < num_ticks; ++j) {
    TickRecord rec;
    rec.tick = j;
    rec.first_frame = t;
    while (t < frames && tick_of(t) == j) ++t;
    rec.num_frames = t - rec.first_frame;
    rec.roi_fraction = roi_state.size_fraction();
    for (std::size_t f = rec.first_frame; f < t; ++f)
      rec.vad_score = std::max(rec.vad_score, frame_scores[f]);
    rec.active = rec.num_frames > 0 &&
                 (config.bypass_vad || rec.vad_score >= config.vad.config.threshold);
    if (!rec.active) {
      have_prev = false;
      run.ticks.push_back(std::move(rec));
      continue;
    }

    std::vector<double> tick_soft;
    tick_soft.reserve(rec.num_frames * bins);
    for (std::size_t f = rec.first_frame; f < t; ++f) {
      for (std::size_t c = 1; c < channels; ++c)
        dsp::stft_frame(mixture.channel(c).subspan(f * hop, n), window, spec.frame(c, f),
                        counter, Stage::Ssl);
      switch (run.mask_source) {
        case MaskSource::Oracle:
          dsp::stft_frame(input.clean->channel(0).subspan(f * hop, n), window, clean_frame);
          masking::oracle_soft_mask_row(clean_frame, spec.frame(0, f), soft);
          charge(counter, Stage::Mask, mask_stand_in_cost);
          break;
        case MaskSource::Network: {
          const auto feats = dsp::log_magnitude(spec.frame(0, f));
          charge(counter, Stage::Mask, flops::log_magnitude(bins));
          soft = mask_stream->step(feats, counter, Stage::Mask);
          break;
        }
        case MaskSource::AllOnes:
          std::fill(soft.begin(), soft.end(), 1.0);
          break;
      }
      for (std::size_t k = 0; k < bins; ++k) binary[k] = soft[k] >= binarize_at ? 1.0 : 0.0;
      if (run.mask_source != MaskSource::AllOnes)
        charge(counter, Stage::Mask, bins);
      tick_soft.insert(tick_soft.end(), soft.begin(), soft.end());
      cross.update(spec, f, binary, counter);
    }

    auto image = models.svd ? models.svd->evaluate(cross, counter, j)
                            : ssl::srp_phat_exact(cross, models.grid, counter, j);
    const double sds = roi::speech_dominance_score(
        masking::TFMask(rec.num_frames, bins, std::move(tick_soft)));
    const bool face_prev =
        have_prev &&
        (input.face_pixel ? prev_box.contains(*input.face_pixel)
                          : config.assume_face_detected);
    roi_state = roi::update_roi_size(roi_state, sds, face_prev);
    const auto box = roi::make_roi(models.grid, image, roi_state);
    charge(counter, Stage::Roi, rec.num_frames * bins + 16);
    charge(counter, Stage::Detector,
           static_cast<std::uint64_t>(
               std::llround(roi::detector_cost_model(box, config.detector_cost_per_pixel))));

    rec.sds = sds;
    rec.image = std::move(image);
    rec.roi = box;
    rec.roi_fraction = roi_state.size_fraction();
    if (input.face_pixel) rec.face_in_roi = box.contains(*input.face_pixel);
    prev_box = box;
    have_prev = true;
    run.ticks.push_back(std::move(rec));
  }
  return run;
}

nlohmann::json tick_to_json(const TickRecord& r) {
  using nlohmann::json;
  json j = {{"frame", r.tick}, {"active", r.active}};
  if (r.active && r.roi && r.image) {
    j["x"] = r.roi->x;
    j["y"] = r.roi->y;
    j["w"] = r.roi->width;
    j["h"] = r.roi->height;
    j["sds"] = *r.sds;
    j["argmax"] = {r.image->argmax.col, r.image->argmax.row};
  } else {
    for (const char* k : {"x", "y", "w", "h", "sds", "argmax"}) j[k] = nullptr;
  }
  return j;
}

}  // namespace audioroi::app
