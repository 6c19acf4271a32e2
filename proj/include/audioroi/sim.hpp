// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "audioroi/audio.hpp"
#include "audioroi/ssl.hpp"
#include "audioroi/stft.hpp"
#include "audioroi/vad.hpp"

namespace audioroi::sim {

/// Mono source arriving from a far-field unit direction (camera frame).
struct SourcePlacement {
  SourcePlacement(Eigen::Vector3d direction, AudioClip signal);

  Eigen::Vector3d direction;
  AudioClip signal;
};

/// Number of taps of the windowed-sinc fractional delay.
inline constexpr std::size_t kFractionalDelayTaps = 33;

/// out[n] = in(n - delay) with band-limited interpolation; samples outside
/// the input are zero. `delay` may be negative or fractional.
void fractional_delay(std::span<const double> in, double delay,
                      std::span<double> out);

/// Plane-wave propagation to every microphone: channel m is the source
/// delayed by -(r_m . u) / c seconds. Equal amplitude on all channels.
AudioClip propagate_free_field(const SourcePlacement& placement,
                               const ssl::ArrayGeometry& geometry,
                               double sample_rate);

struct RirSpec {
  std::size_t length = 8000;
  double rt60_s = 0.3;
  std::size_t direct_delay = 0;
  std::size_t channels = 1;
  double sample_rate = 16000.0;
  double tail_gain = 0.2;
};

/// Unit direct-path spike plus an exponentially decaying Gaussian tail whose
/// energy drops 60 dB after rt60. Deterministic per seed; independent tails
/// per channel. rt60 <= 0 gives a pure delayed delta.
std::vector<std::vector<double>> synth_rir(const RirSpec& spec,
                                           std::uint64_t seed);

enum class NoiseKind { White, Pink, Tonal };

NoiseKind parse_noise_kind(std::string_view name);
std::string_view noise_kind_name(NoiseKind kind);

/// Speech-like test signal: harmonic voiced syllables with formant shaping,
/// pitch drift and short pauses. Peak amplitude 0.5.
std::vector<double> synth_voice(std::size_t length, double sample_rate,
                                std::uint64_t seed);

/// Unit-RMS noise. Tonal is a sequence of sustained harmonic notes.
std::vector<double> synth_noise(NoiseKind kind, std::size_t length,
                                double sample_rate, std::uint64_t seed);

/// Circular shift right by `shift` samples.
std::vector<double> roll(std::span<const double> x, std::size_t shift);

struct SilenceSpan {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct MixSpec {
  std::optional<SourcePlacement> voice;
  std::optional<SourcePlacement> noise;
  double snr_db = 10.0;
  double gain = 0.2;
  std::size_t voice_roll = 0;
  std::size_t noise_roll = 0;
  std::optional<SilenceSpan> silence;
  std::size_t rir_length = 0;  // 0: free field only
  double rt60_s = 0.3;
  std::uint64_t rir_seed = 0;
  double sample_rate = 16000.0;
  dsp::StftConfig stft;  // framing used for vad_truth
  vad::VadConfig vad;
};

struct MixResult {
  AudioClip mixture;          // gain * (voice + scaled noise)
  AudioClip clean_reference;  // post-RIR voice alone, before gain
  vad::VadLabelSequence vad_truth;
  double noise_scale = 0.0;
  double gain = 1.0;
};

/// Rolls, inserts silence, convolves with RIRs, scales noise to the target
/// SNR, sums and applies the gain. VAD truth comes from the rolled voice
/// before silence insertion; frames lying entirely inside the silence are
/// then forced to zero.
MixResult mix(const MixSpec& spec, const ssl::ArrayGeometry& geometry);

/// 10 log10(E_voice / E_noise).
double measure_snr_db(const AudioClip& voice, const AudioClip& noise);

enum class MixCategory { VoiceOnly, NoiseOnly, VoiceEnvironmental, VoiceMusic, VoiceWhite };

/// Category proportions of the augmentation mixer: 10% voice only, 15% noise
/// only, 40% voice + environmental noise, 30% voice + music, 5% voice +
/// white noise.
MixCategory draw_category(std::mt19937_64& rng);

/// Gaussian gain redrawn until positive.
double draw_gain(std::mt19937_64& rng, double mean, double sigma);

struct AugmentationParams {
  double snr_min_db = -10.0;
  double snr_max_db = 20.0;
  double gain_mean = 0.2;
  double gain_sigma = 0.05;
  double silence_probability = 0.5;
  double silence_min_s = 0.2;
  double silence_max_s = 1.0;
  double rir_length_s = 0.5;
  double rt60_min_s = 0.2;
  double rt60_max_s = 1.0;
};

struct TrainingMix {
  MixCategory category;
  MixSpec spec;
};

/// One randomized augmentation sample with synthetic voice and noise.
TrainingMix draw_training_mix(std::mt19937_64& rng, const AugmentationParams& params,
                              std::size_t length, double sample_rate,
                              const Eigen::Vector3d& voice_direction,
                              const Eigen::Vector3d& noise_direction);

}  // namespace audioroi::sim
