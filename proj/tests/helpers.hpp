// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <unistd.h>
#include <vector>

#include "audioroi/fft.hpp"

namespace testing {

inline std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n,
                                         double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

// Textbook O(N^2) DFT, bins 0..N/2.
inline std::vector<std::complex<double>> naive_rdft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) /
                        static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> naive_convolve(std::span<const double> a,
                                          std::span<const double> b) {
  std::vector<double> y(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) y[i + j] += a[i] * b[j];
  return y;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("audioroi_test_" + std::to_string(::getpid())) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

// Zero-lag normalized cross-correlation of a and b after both are restricted
// to [lo_hz, hi_hz], computed from one-sided spectra via Parseval.
inline double band_limited_ncc(std::span<const double> a, std::span<const double> b,
                               double fs, double lo_hz, double hi_hz) {
  std::size_t n = 1;
  while (n < 2 * std::max(a.size(), b.size())) n *= 2;
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  audioroi::dsp::rfft(pa, fa);
  audioroi::dsp::rfft(pb, fb);
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f < lo_hz || f > hi_hz) continue;
    const double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    ab += w * std::real(fa[k] * std::conj(fb[k]));
    aa += w * std::norm(fa[k]);
    bb += w * std::norm(fb[k]);
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace testing
