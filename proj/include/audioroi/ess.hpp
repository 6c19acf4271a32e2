// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

#include "audioroi/audio.hpp"

namespace audioroi::ess {

struct SweepSpec {
  double f_start = 20.0;
  double f_end = 8000.0;
  double duration_s = 10.0;
  double tail_s = 3.0;
  double sample_rate = 16000.0;
  double amplitude = 1.0;

  /// 0 < f_start < f_end <= fs / 2, duration > 0, tail >= 0, amplitude > 0.
  void validate() const;
  std::size_t sweep_length() const;
  std::size_t tail_length() const;
};

/// x(t) = A sin(2 pi f1 T / ln(f2/f1) (exp(t ln(f2/f1) / T) - 1)),
/// sampled for t = n / fs, 0 <= n < T fs.
AudioClip generate_sweep(const SweepSpec& spec);

/// Time-reversed sweep with an exp(-t ln(f2/f1) / T) envelope (-6 dB per
/// octave towards low frequencies), scaled so that sweep * inverse peaks at
/// exactly 1 at lag sweep_length - 1.
AudioClip inverse_filter(const SweepSpec& spec);

/// Deconvolves every channel against the inverse filter and keeps
/// `rir_length` samples starting at the deconvolution peak. Harmonic
/// distortion products land before the peak and are dropped.
std::vector<std::vector<double>> extract_rir(const AudioClip& recording,
                                             const SweepSpec& spec,
                                             std::size_t rir_length);

/// extract_rir with the default 500 ms length.
std::vector<std::vector<double>> extract_rir(const AudioClip& recording,
                                             const SweepSpec& spec);

}  // namespace audioroi::ess
