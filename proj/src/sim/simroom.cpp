// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "audioroi/fft.hpp"
#include "audioroi/sim.hpp"

namespace audioroi::sim {
namespace {

AudioClip convolve_channels(const AudioClip& clip,
                            const std::vector<std::vector<double>>& rirs) {
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < clip.num_channels(); ++c) {
    auto y = dsp::fft_convolve(clip.channel(c), rirs[c]);
    y.resize(clip.length());
    out.push_back(std::move(y));
  }
  return AudioClip(std::move(out), clip.sample_rate());
}

struct SpatialSource {
  AudioClip clip;
  std::vector<double> dry;  // mono after roll and silence insertion
};

SpatialSource render_source(const SourcePlacement& placement, std::size_t roll_by,
                            const std::optional<SilenceSpan>& silence,
                            const MixSpec& spec, const ssl::ArrayGeometry& geometry,
                            std::uint64_t rir_seed) {
  auto dry = roll(placement.signal.channel(0), roll_by);
  if (silence) {
    const std::size_t end = std::min(dry.size(), silence->start + silence->length);
    for (std::size_t i = std::min(silence->start, end); i < end; ++i) dry[i] = 0.0;
  }
  SourcePlacement rolled(placement.direction, AudioClip::mono(dry, spec.sample_rate));
  auto clip = propagate_free_field(rolled, geometry, spec.sample_rate);
  if (spec.rir_length > 0) {
    RirSpec rs;
    rs.length = spec.rir_length;
    rs.rt60_s = spec.rt60_s;
    rs.channels = geometry.num_mics();
    rs.sample_rate = spec.sample_rate;
    clip = convolve_channels(clip, synth_rir(rs, rir_seed));
  }
  return {std::move(clip), std::move(dry)};
}

}  // namespace

SourcePlacement::SourcePlacement(Eigen::Vector3d dir, AudioClip sig)
    : direction(std::move(dir)), signal(std::move(sig)) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("source direction must be a unit vector");
  if (signal.num_channels() != 1)
    throw std::invalid_argument("source signal must be mono");
}

AudioClip propagate_free_field(const SourcePlacement& placement,
                               const ssl::ArrayGeometry& geometry,
                               double sample_rate) {
  if (placement.signal.sample_rate() != sample_rate)
    throw std::invalid_argument("source sample rate does not match simulation");
  const auto x = placement.signal.channel(0);
  std::vector<std::vector<double>> out;
  for (const auto& mic : geometry.mics()) {
    const double delay =
        -mic.dot(placement.direction) / ssl::kSpeedOfSound * sample_rate;
    std::vector<double> y(x.size());
    fractional_delay(x, delay, y);
    out.push_back(std::move(y));
  }
  return AudioClip(std::move(out), sample_rate);
}

double measure_snr_db(const AudioClip& voice, const AudioClip& noise) {
  return 10.0 * std::log10(voice.energy() / noise.energy());
}

MixResult mix(const MixSpec& spec, const ssl::ArrayGeometry& geometry) {
  if (!spec.voice && !spec.noise)
    throw std::invalid_argument("mix needs a voice or a noise source");
  if (!(spec.gain > 0.0)) throw std::invalid_argument("mix gain must be positive");
  spec.stft.validate();
  if (spec.voice && spec.noise &&
      spec.voice->signal.length() != spec.noise->signal.length())
    throw std::invalid_argument("voice and noise lengths differ");

  const std::size_t length =
      spec.voice ? spec.voice->signal.length() : spec.noise->signal.length();
  const std::size_t channels = geometry.num_mics();
  const std::size_t frames = dsp::num_stft_frames(length, spec.stft);

  auto clean = AudioClip::zeros(channels, length, spec.sample_rate);
  vad::VadLabelSequence truth;
  truth.noisy.assign(frames, 0);
  truth.desensitized.assign(frames, 0.0);
  truth.final.assign(frames, 0);

  if (spec.voice) {
    if (spec.voice->signal.sample_rate() != spec.sample_rate)
      throw std::invalid_argument("voice sample rate does not match simulation");
    auto src = render_source(*spec.voice, spec.voice_roll, spec.silence, spec,
                             geometry, spec.rir_seed);
    clean = std::move(src.clip);
    if (frames > 0) {
      // Labels come from the rolled voice before the silence is inserted.
      auto labelled = roll(spec.voice->signal.channel(0), spec.voice_roll);
      auto voice_spec =
          dsp::stft(AudioClip::mono(std::move(labelled), spec.sample_rate), spec.stft);
      truth = vad::make_vad_labels(dsp::frame_energy(voice_spec, 0), spec.vad);
      if (spec.silence) {
        const std::size_t s0 = spec.silence->start;
        const std::size_t s1 = s0 + spec.silence->length;
        for (std::size_t t = 0; t < frames; ++t) {
          const std::size_t a = t * spec.stft.hop_size;
          if (a >= s0 && a + spec.stft.frame_size <= s1) {
            truth.noisy[t] = 0;
            truth.desensitized[t] = 0.0;
            truth.final[t] = 0;
          }
        }
      }
    }
  }

  AudioClip noise = AudioClip::zeros(channels, length, spec.sample_rate);
  double noise_scale = 0.0;
  if (spec.noise) {
    if (spec.noise->signal.sample_rate() != spec.sample_rate)
      throw std::invalid_argument("noise sample rate does not match simulation");
    noise = render_source(*spec.noise, spec.noise_roll, std::nullopt, spec,
                          geometry, spec.rir_seed ^ 0x9E3779B97F4A7C15ULL)
                .clip;
    if (spec.voice) {
      const double ev = clean.energy();
      const double en = noise.energy();
      if (ev == 0.0 || en == 0.0)
        throw std::invalid_argument("cannot scale to SNR: zero-energy source");
      noise_scale = std::sqrt(ev / (en * std::pow(10.0, spec.snr_db / 10.0)));
    } else {
      noise_scale = 1.0;
    }
  }

  std::vector<std::vector<double>> mixed(channels, std::vector<double>(length));
  for (std::size_t c = 0; c < channels; ++c) {
    auto v = clean.channel(c);
    auto n = noise.channel(c);
    for (std::size_t i = 0; i < length; ++i)
      mixed[c][i] = spec.gain * (v[i] + noise_scale * n[i]);
  }
  return {AudioClip(std::move(mixed), spec.sample_rate), std::move(clean),
          std::move(truth), noise_scale, spec.gain};
}

MixCategory draw_category(std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < 0.10) return MixCategory::VoiceOnly;
  if (u < 0.25) return MixCategory::NoiseOnly;
  if (u < 0.65) return MixCategory::VoiceEnvironmental;
  if (u < 0.95) return MixCategory::VoiceMusic;
  return MixCategory::VoiceWhite;
}

double draw_gain(std::mt19937_64& rng, double mean, double sigma) {
  if (!(mean > 0.0) || sigma < 0.0)
    throw std::invalid_argument("gain distribution needs mean > 0, sigma >= 0");
  std::normal_distribution<double> dist(mean, sigma);
  for (;;) {
    const double g = dist(rng);
    if (g > 0.0) return g;
  }
}

TrainingMix draw_training_mix(std::mt19937_64& rng, const AugmentationParams& params,
                              std::size_t length, double sample_rate,
                              const Eigen::Vector3d& voice_direction,
                              const Eigen::Vector3d& noise_direction) {
  std::uniform_int_distribution<std::uint64_t> seeds;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrainingMix out{draw_category(rng), {}};
  MixSpec& spec = out.spec;
  spec.sample_rate = sample_rate;

  const bool has_voice = out.category != MixCategory::NoiseOnly;
  const bool has_noise = out.category != MixCategory::VoiceOnly;
  if (has_voice) {
    spec.voice.emplace(voice_direction,
                       AudioClip::mono(synth_voice(length, sample_rate, seeds(rng)),
                                       sample_rate));
    spec.voice_roll = static_cast<std::size_t>(unit(rng) * static_cast<double>(length));
    if (unit(rng) < params.silence_probability) {
      const double dur = params.silence_min_s +
                         unit(rng) * (params.silence_max_s - params.silence_min_s);
      // At most half the clip, so some voice always survives.
      const auto len = std::min(length / 2, static_cast<std::size_t>(dur * sample_rate));
      spec.silence = SilenceSpan{
          static_cast<std::size_t>(unit(rng) * static_cast<double>(length - len)), len};
    }
  }
  if (has_noise) {
    NoiseKind kind = NoiseKind::Pink;
    if (out.category == MixCategory::VoiceMusic) kind = NoiseKind::Tonal;
    if (out.category == MixCategory::VoiceWhite) kind = NoiseKind::White;
    if (out.category == MixCategory::NoiseOnly)
      kind = static_cast<NoiseKind>(std::uniform_int_distribution<int>(0, 2)(rng));
    spec.noise.emplace(noise_direction,
                       AudioClip::mono(synth_noise(kind, length, sample_rate, seeds(rng)),
                                       sample_rate));
    spec.noise_roll = static_cast<std::size_t>(unit(rng) * static_cast<double>(length));
  }
  spec.snr_db = params.snr_min_db + unit(rng) * (params.snr_max_db - params.snr_min_db);
  spec.gain = draw_gain(rng, params.gain_mean, params.gain_sigma);
  spec.rir_length = static_cast<std::size_t>(params.rir_length_s * sample_rate);
  spec.rt60_s = params.rt60_min_s + unit(rng) * (params.rt60_max_s - params.rt60_min_s);
  spec.rir_seed = seeds(rng);
  return out;
}

}  // namespace audioroi::sim
