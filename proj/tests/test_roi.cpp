// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <random>

#include "doctest.h"

#include "audioroi/roi.hpp"

using namespace audioroi;
using namespace audioroi::roi;

namespace {

ssl::SteeringGrid grid() {
  return ssl::build_grid(ssl::ArrayGeometry::square(), ssl::CameraModel{}, ssl::GridDims{}, 16000.0, 512);
}

ssl::AcousticImage peak_at(const ssl::SteeringGrid& g, ssl::RegionIndex r) {
  std::vector<double> e(g.num_regions(), 0.0);
  e[g.region_index(r)] = 1.0;
  return ssl::AcousticImage::from_energies(g.dims(), e);
}

}  // namespace

TEST_SUITE("roi") {

TEST_CASE("speech dominance score") {
  CHECK(speech_dominance_score(masking::TFMask::filled(4, 257, 1.0)) == 1.0);
  CHECK(speech_dominance_score(masking::TFMask::filled(4, 257, 0.0)) == 0.0);
  std::vector<double> half(6 * 10);
  for (std::size_t i = 0; i < half.size(); ++i) half[i] = (i * 7) % 2 == 0 ? 1.0 : 0.0;
  CHECK(speech_dominance_score(masking::TFMask(6, 10, half, true)) == 0.5);
  CHECK_THROWS(speech_dominance_score(masking::TFMask(0, 10, {})));
}

TEST_CASE("parameters") {
  CHECK_NOTHROW(RoiParams{}.validate());
  CHECK_THROWS(RoiParams{0.3, 0.0}.validate());
  CHECK_THROWS(RoiParams{0.3, 1.0}.validate());
  CHECK_THROWS(RoiParams{0.3, 0.1, 0.7, 0.6}.validate());
  CHECK_THROWS(RoiParams{0.3, 0.1, 0.35, 1.5}.validate());
  CHECK_THROWS(RoiParams{1.3}.validate());
  CHECK(RoiState{}.size_fraction() == 0.65);
  CHECK_THROWS(RoiState(RoiParams{}, 0.2));
}

TEST_CASE("sizing updates") {
  const RoiState half(RoiParams{}, 0.5);
  CHECK(update_roi_size(half, 0.6, true).size_fraction() == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(update_roi_size(half, 0.6, false).size_fraction() == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(update_roi_size(half, 0.3, true).size_fraction() == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(update_roi_size(RoiState(RoiParams{}, 0.36), 0.9, true).size_fraction() == 0.35);
  CHECK(update_roi_size(RoiState(RoiParams{}, 0.65), 0.1, true).size_fraction() == 0.65);
  const auto next = update_roi_size(half, 0.6, true);
  CHECK(next.last_face_detected());
  CHECK(next.last_sds() == 0.6);
  CHECK_THROWS(update_roi_size(half, 1.2, true));
  CHECK_THROWS(update_roi_size(half, -0.1, true));
}

TEST_CASE("random walks stay in bounds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int walk = 0; walk < 20; ++walk) {
    const RoiParams params{u(rng), 0.01 + 0.9 * u(rng)};
    RoiState s(params);
    for (int i = 0; i < 2000; ++i) {
      const double sds = u(rng);
      const auto shrunk = update_roi_size(s, sds, true);
      const auto grown = update_roi_size(s, 0.0, false);
      CHECK(shrunk.size_fraction() <= grown.size_fraction());
      s = update_roi_size(s, sds, coin(rng));
      REQUIRE(s.size_fraction() >= 0.35);
      REQUIRE(s.size_fraction() <= 0.65);
    }
  }
}

TEST_CASE("box placement") {
  const auto g = grid();
  const auto center = make_roi(g, peak_at(g, {4, 3}), RoiState(RoiParams{}, 0.5));
  CHECK(center.x == doctest::Approx(160.0));
  CHECK(center.y == doctest::Approx(120.0));
  CHECK(center.width == doctest::Approx(320.0));
  CHECK(center.height == doctest::Approx(240.0));
  CHECK_FALSE(center.clipped);

  const auto big = make_roi(g, peak_at(g, {4, 3}), RoiState{});
  CHECK(big.width == doctest::Approx(416.0));
  CHECK(big.height == doctest::Approx(312.0));

  const auto corner = make_roi(g, peak_at(g, {0, 0}), RoiState(RoiParams{}, 0.5));
  CHECK(corner.x == 0.0);
  CHECK(corner.y == 0.0);
  CHECK(corner.width == doctest::Approx(320.0));
  CHECK(corner.clipped);
  const auto far = make_roi(g, peak_at(g, {8, 6}), RoiState{});
  CHECK(far.x + far.width == doctest::Approx(640.0));
  CHECK(far.y + far.height == doctest::Approx(480.0));

  const double cw = 640.0 / 9.0, ch = 480.0 / 7.0;
  for (double f : {0.35, 0.5, 0.65})
    for (std::size_t q = 0; q < g.num_regions(); ++q) {
      const auto r = g.region_at(q);
      const auto box = make_roi(g, peak_at(g, r), RoiState(RoiParams{}, f));
      CHECK(box.x >= 0.0);
      CHECK(box.y >= 0.0);
      CHECK(box.x + box.width <= 640.0 + 1e-9);
      CHECK(box.y + box.height <= 480.0 + 1e-9);
      if (!box.clipped) CHECK(box.contains(ssl::region_to_pixel(g, r)));
      const bool meets = box.x < (r.col + 1) * cw && box.x + box.width > r.col * cw &&
                         box.y < (r.row + 1) * ch && box.y + box.height > r.row * ch;
      CHECK(meets);
    }
  ssl::AcousticImage empty;
  CHECK_THROWS(make_roi(g, empty, RoiState{}));
}

TEST_CASE("detector cost") {
  const ssl::CameraModel cam;
  const double full = detector_full_frame_cost(cam, 1000.0);
  CHECK(full == 640.0 * 480.0 * 1000.0);
  const auto g = grid();
  CHECK(detector_cost_model(RoiBox{0, 0, 640, 480}, 1000.0) / full == 1.0);
  const auto big = make_roi(g, peak_at(g, {4, 3}), RoiState{});
  CHECK(detector_cost_model(big, 1000.0) / full == doctest::Approx(0.4225));
  CHECK(full / detector_cost_model(big, 1000.0) == doctest::Approx(2.367).epsilon(1e-3));
  const auto small = make_roi(g, peak_at(g, {4, 3}), RoiState(RoiParams{}, 0.35));
  CHECK(full / detector_cost_model(small, 1000.0) == doctest::Approx(8.163).epsilon(1e-3));
  CHECK_THROWS(detector_cost_model(big, 0.0));
}

}  // TEST_SUITE
