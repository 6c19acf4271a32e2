// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "audioroi/audio.hpp"
#include "audioroi/fft.hpp"
#include "audioroi/op_counter.hpp"
#include "audioroi/stft.hpp"
#include "audioroi/wav.hpp"

using namespace audioroi;
using dsp::StftConfig;
using dsp::Window;

TEST_SUITE("core") {

TEST_CASE("audio clip invariants") {
  CHECK_THROWS_AS(AudioClip({}, 16000.0), std::invalid_argument);
  CHECK_THROWS_AS(AudioClip({{1.0, 2.0}, {1.0}}, 16000.0), std::invalid_argument);
  CHECK_THROWS_AS(AudioClip::mono({1.0}, 0.0), std::invalid_argument);
  const auto clip = AudioClip({{1.0, 2.0}, {3.0, 0.0}}, 8000.0);
  CHECK(clip.num_channels() == 2);
  CHECK(clip.length() == 2);
  CHECK(clip.energy() == doctest::Approx(14.0));
  CHECK_THROWS_AS(clip.channel(2), std::out_of_range);
}

TEST_CASE("stft config validation") {
  CHECK_THROWS(StftConfig{7, 2, Window::Hann}.validate());
  CHECK_THROWS(StftConfig{8, 0, Window::Hann}.validate());
  CHECK_THROWS(StftConfig{8, 9, Window::Hann}.validate());
  CHECK_NOTHROW(StftConfig{8, 8, Window::Rect}.validate());
  CHECK(StftConfig{}.num_bins() == 257);
}

TEST_CASE("fft against the textbook DFT") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 8u, 30u, 64u, 512u}) {
    const auto x = testing::random_signal(rng, n);
    std::vector<std::complex<double>> got(n / 2 + 1);
    dsp::rfft(x, got);
    const auto want = testing::naive_rdft(x);
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
    std::vector<double> back(n);
    dsp::irfft(got, back);
    for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("fft convolution is linear convolution") {
  std::mt19937_64 rng(5);
  const auto a = testing::random_signal(rng, 37);
  const auto b = testing::random_signal(rng, 100);
  const auto got = dsp::fft_convolve(a, b);
  const auto want = testing::naive_convolve(a, b);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
  CHECK(dsp::next_pow2(1) == 1);
  CHECK(dsp::next_pow2(5) == 8);
  CHECK(dsp::next_pow2(64) == 64);
}

TEST_CASE("frame count drops the partial tail") {
  const StftConfig cfg{8, 4, Window::Hann};
  CHECK(dsp::num_stft_frames(7, cfg) == 0);
  CHECK(dsp::num_stft_frames(8, cfg) == 1);
  CHECK(dsp::num_stft_frames(11, cfg) == 1);
  CHECK(dsp::num_stft_frames(12, cfg) == 2);
  CHECK(dsp::num_stft_frames(100, cfg) == 1 + (100 - 8) / 4);
}

TEST_CASE("stft rejects clips shorter than a frame") {
  const auto clip = AudioClip::mono(std::vector<double>(7, 1.0), 16000.0);
  try {
    dsp::stft(clip, StftConfig{8, 4, Window::Hann});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("insufficient samples") != std::string::npos);
  }
}

TEST_CASE("dc input with a rect window lands in bin 0") {
  const auto clip = AudioClip::mono(std::vector<double>(8, 0.25), 16000.0);
  const auto spec = dsp::stft(clip, StftConfig{8, 8, Window::Rect});
  REQUIRE(spec.num_frames() == 1);
  CHECK(std::abs(spec.at(0, 0, 0) - std::complex<double>(2.0, 0.0)) < 1e-12);
  for (std::size_t k = 1; k < spec.num_bins(); ++k) CHECK(std::abs(spec.at(0, 0, k)) < 1e-12);
}

TEST_CASE("bin-centered sinusoid concentrates in its bin") {
  std::vector<double> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = std::cos(2.0 * std::numbers::pi * 4.0 * i / 16.0);
  const auto spec = dsp::stft(AudioClip::mono(x, 16000.0), StftConfig{16, 16, Window::Rect});
  CHECK(std::abs(spec.at(0, 0, 4)) == doctest::Approx(8.0));
  for (std::size_t k = 0; k < spec.num_bins(); ++k)
    if (k != 4) CHECK(std::abs(spec.at(0, 0, k)) < 1e-12);
}

TEST_CASE("stft frames equal the DFT of windowed samples") {
  std::mt19937_64 rng(3);
  const StftConfig cfg{64, 16, Window::Hann};
  const auto x = testing::random_signal(rng, 300);
  const auto spec = dsp::stft(AudioClip::mono(x, 16000.0), cfg);
  // Periodic Hann written out directly.
  std::vector<double> w(64);
  for (std::size_t i = 0; i < 64; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / 64.0);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    std::vector<double> seg(64);
    for (std::size_t i = 0; i < 64; ++i) seg[i] = w[i] * x[t * 16 + i];
    const auto want = testing::naive_rdft(seg);
    for (std::size_t k = 0; k < spec.num_bins(); ++k) CHECK(std::abs(spec.at(0, t, k) - want[k]) < 1e-9);
  }
}

TEST_CASE("istft reconstructs interior samples") {
  std::mt19937_64 rng(17);
  for (const auto& cfg : {StftConfig{512, 256, Window::Hann}, StftConfig{256, 64, Window::Hann},
                          StftConfig{128, 128, Window::Rect}}) {
    const auto x = testing::random_signal(rng, 5000);
    const auto spec = dsp::stft(AudioClip::mono(x, 16000.0), cfg);
    const auto y = dsp::istft(spec);
    const std::size_t lo = cfg.frame_size - cfg.hop_size;
    const std::size_t hi = spec.num_frames() * cfg.hop_size;
    double err = 0.0;
    for (std::size_t i = lo; i < hi; ++i) err += std::pow(y.channel(0)[i] - x[i], 2);
    CHECK(std::sqrt(err / static_cast<double>(hi - lo)) < 1e-6);
  }
}

TEST_CASE("istft edge cases") {
  const StftConfig cfg{16, 8, Window::Hann};
  dsp::Spectrogram zero(2, 3, cfg, 16000.0);
  const auto y = dsp::istft(zero);
  CHECK(y.num_channels() == 2);
  CHECK(y.length() == 2 * 8 + 16);
  CHECK(y.energy() == 0.0);

  // One frame: inverse DFT scaled by the overlap-add gain sum(w) / hop.
  std::mt19937_64 rng(2);
  const auto x = testing::random_signal(rng, 16);
  const auto spec = dsp::stft(AudioClip::mono(x, 16000.0), cfg);
  REQUIRE(spec.num_frames() == 1);
  const auto w = dsp::make_window(Window::Hann, 16);
  const double gain = std::accumulate(w.begin(), w.end(), 0.0) / 8.0;
  const auto one = dsp::istft(spec);
  for (std::size_t i = 0; i < 16; ++i) CHECK(one.channel(0)[i] == doctest::Approx(w[i] * x[i] / gain));

  CHECK_THROWS(dsp::istft(dsp::Spectrogram(1, 1, StftConfig{16, 16, Window::Hann}, 16000.0)));
  CHECK_THROWS(dsp::istft(dsp::Spectrogram(1, 1, StftConfig{16, 6, Window::Hann}, 16000.0)));
}

TEST_CASE("frame energy") {
  const StftConfig cfg{8, 4, Window::Rect};
  dsp::Spectrogram spec(1, 1, cfg, 16000.0);
  CHECK(dsp::frame_energy(spec, 0) == std::vector<double>{0.0});
  spec.at(0, 0, 2) = {0.0, 2.0};
  CHECK(dsp::frame_energy(spec, 0) == std::vector<double>{4.0});
  CHECK_THROWS_AS(dsp::frame_energy(spec, 1), std::out_of_range);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  dsp::Spectrogram r(2, 6, cfg, 16000.0);
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t k = 0; k < r.num_bins(); ++k) r.at(1, t, k) = {g(rng), g(rng)};
  const auto e = dsp::frame_energy(r, 1);
  for (std::size_t t = 0; t < 6; ++t) {
    double want = 0.0;
    for (std::size_t k = 0; k < r.num_bins(); ++k)
      want += r.at(1, t, k).real() * r.at(1, t, k).real() + r.at(1, t, k).imag() * r.at(1, t, k).imag();
    CHECK(e[t] == want);
  }
}

TEST_CASE("parseval with a rect window") {
  // E[t] sums the stored half spectrum once; Parseval needs the mirrored
  // bins, so interior bins count twice.
  std::mt19937_64 rng(21);
  const StftConfig cfg{32, 32, Window::Rect};
  const auto x = testing::random_signal(rng, 320);
  const auto spec = dsp::stft(AudioClip::mono(x, 16000.0), cfg);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    double two_sided = 0.0;
    for (std::size_t k = 0; k < spec.num_bins(); ++k) {
      const double m = std::norm(spec.at(0, t, k));
      two_sided += (k == 0 || k == 16) ? m : 2.0 * m;
    }
    double time = 0.0;
    for (std::size_t i = 0; i < 32; ++i) time += x[t * 32 + i] * x[t * 32 + i];
    CHECK(std::abs(two_sided / 32.0 - time) <= 1e-6 * time);
  }
}

TEST_CASE("stft is linear") {
  std::mt19937_64 rng(4);
  const StftConfig cfg{64, 32, Window::Hann};
  const auto x = testing::random_signal(rng, 400);
  const auto y = testing::random_signal(rng, 400);
  std::vector<double> z(400);
  const double a = 0.7, b = -2.3;
  for (std::size_t i = 0; i < 400; ++i) z[i] = a * x[i] + b * y[i];
  const auto sx = dsp::stft(AudioClip::mono(x, 1.0), cfg);
  const auto sy = dsp::stft(AudioClip::mono(y, 1.0), cfg);
  const auto sz = dsp::stft(AudioClip::mono(z, 1.0), cfg);
  for (std::size_t t = 0; t < sz.num_frames(); ++t)
    for (std::size_t k = 0; k < sz.num_bins(); ++k)
      CHECK(std::abs(sz.at(0, t, k) - (a * sx.at(0, t, k) + b * sy.at(0, t, k))) < 1e-9);
}

TEST_CASE("op counter") {
  CHECK(flops::real_fft(512) == 11520);  // 2.5 * 512 * 9
  CHECK(flops::complex_fft(8) == 120);
  CHECK(flops::stft_frame(512) == 512 + 11520);

  std::mt19937_64 rng(9);
  const auto clip = AudioClip::mono(testing::random_signal(rng, 4000), 16000.0);
  OpCounter a, b;
  const auto sa = dsp::stft(clip, StftConfig{}, &a);
  dsp::stft(clip, StftConfig{}, &b);
  CHECK(a.snapshot().flops == b.snapshot().flops);
  CHECK(a.get(Stage::Frontend) == sa.num_frames() * flops::stft_frame(512));
  CHECK(a.total() == a.get(Stage::Frontend));
  dsp::stft(clip, StftConfig{}, &a, Stage::Ssl);
  CHECK(a.get(Stage::Ssl) == a.get(Stage::Frontend));
  a.reset();
  CHECK(a.total() == 0);

  OpCounts c;
  c.flops[static_cast<std::size_t>(Stage::Detector)] = 5;
  c.flops[static_cast<std::size_t>(Stage::Mask)] = 3;
  CHECK(c.total() == 8);
  CHECK(c.pipeline_total() == 3);
}

TEST_CASE("wav round trips") {
  const auto dir = testing::scratch_dir("wav");
  std::mt19937_64 rng(1);
  std::vector<std::vector<double>> ch(3);
  for (auto& c : ch) {
    c = testing::random_signal(rng, 1000, 0.2);
    for (auto& v : c) v = std::clamp(v, -0.99, 0.99);
  }
  const AudioClip clip(ch, 16000.0);

  write_wav(dir / "f.wav", clip, SampleFormat::Float32);
  const auto f = read_wav(dir / "f.wav", 16000.0);
  REQUIRE(f.num_channels() == 3);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < 1000; ++i)
      CHECK(f.channel(c)[i] == static_cast<double>(static_cast<float>(ch[c][i])));

  write_wav(dir / "p.wav", clip, SampleFormat::Pcm16);
  const auto p = read_wav(dir / "p.wav");
  CHECK(p.sample_rate() == 16000.0);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < 1000; ++i) CHECK(std::abs(p.channel(c)[i] - ch[c][i]) <= 1.0 / 32768.0);

  CHECK_THROWS_AS(read_wav(dir / "p.wav", 48000.0), std::runtime_error);
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), std::runtime_error);
  {
    std::ofstream junk(dir / "junk.wav");
    junk << "not a wave file at all";
  }
  CHECK_THROWS_AS(read_wav(dir / "junk.wav"), std::runtime_error);
  CHECK_THROWS(write_wav(dir / "nine.wav", AudioClip::zeros(9, 10, 16000.0)));
}

}  // TEST_SUITE
