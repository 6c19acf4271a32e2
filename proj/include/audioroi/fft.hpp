// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace audioroi::dsp {

/// Forward real FFT. out.size() must be in.size() / 2 + 1.
void rfft(std::span<const double> in, std::span<std::complex<double>> out);

/// Inverse real FFT, scaled by 1/n so that irfft(rfft(x)) == x.
/// in.size() must be out.size() / 2 + 1.
void irfft(std::span<const std::complex<double>> in, std::span<double> out);

/// Linear convolution through a zero-padded FFT. Result length a + b - 1.
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

std::size_t next_pow2(std::size_t n);

}  // namespace audioroi::dsp
