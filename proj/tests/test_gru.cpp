// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "audioroi/gru.hpp"

using namespace audioroi;
using namespace audioroi::nn;

namespace {

GruNetwork scalar_net() {
  auto layer = GruLayer::zeros(1, 1);
  layer.w_ih << 0.5, -0.3, 0.8;  // r, z, n
  layer.w_hh << 0.1, 0.2, -0.4;
  layer.b_ih << 0.05, -0.1, 0.2;
  layer.b_hh << 0.0, 0.15, -0.05;
  auto head = LinearLayer::zeros(1, 1);
  head.weight(0, 0) = 1.5;
  head.bias(0) = -0.2;
  return GruNetwork({layer}, head);
}

GruNetwork random_net(std::mt19937_64& rng, std::size_t in,
                      const std::vector<std::size_t>& hidden, std::size_t out) {
  std::normal_distribution<double> g(0.0, 0.5);
  auto net = GruNetwork::zeros(in, hidden, out);
  std::vector<GruLayer> layers = net.layers();
  for (auto& l : layers) {
    l.w_ih = l.w_ih.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
    l.w_hh = l.w_hh.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
    l.b_ih = l.b_ih.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
    l.b_hh = l.b_hh.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
  }
  auto head = net.head();
  head.weight = head.weight.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
  head.bias = head.bias.unaryExpr([&](double) { return static_cast<double>(static_cast<float>(g(rng))); });
  return GruNetwork(layers, head);
}

}  // namespace

TEST_SUITE("gru") {

TEST_CASE("zero network outputs one half") {
  const auto net = GruNetwork::zeros(5, {4, 3}, 2);
  std::mt19937_64 rng(1);
  std::vector<std::vector<double>> feats;
  for (int t = 0; t < 7; ++t) feats.push_back(testing::random_signal(rng, 5));
  for (const auto& row : gru_forward(net, feats))
    for (double v : row) CHECK(v == 0.5);
}

TEST_CASE("scalar recurrence matches a hand computation") {
  const auto net = scalar_net();
  const auto out = gru_forward(net, {{0.7}, {-1.1}});
  CHECK(out[0][0] == doctest::Approx(0.5572533671511519).epsilon(1e-6));
  CHECK(out[1][0] == doctest::Approx(0.3528580340237464).epsilon(1e-6));
}

TEST_CASE("streams are causal and resettable") {
  std::mt19937_64 rng(2);
  const auto net = random_net(rng, 6, {5, 4}, 3);
  std::vector<std::vector<double>> feats;
  for (int t = 0; t < 12; ++t) feats.push_back(testing::random_signal(rng, 6));
  const auto full = gru_forward(net, feats);
  for (std::size_t n : {1u, 5u, 11u}) {
    std::vector<std::vector<double>> head(feats.begin(), feats.begin() + n);
    const auto part = gru_forward(net, head);
    for (std::size_t t = 0; t < n; ++t) CHECK(part[t] == full[t]);
  }
  GruStream s(net);
  s.step(feats[3]);
  s.reset();
  CHECK(s.step(feats[0]) == full[0]);
  for (const auto& row : full)
    for (double v : row) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("parameter counts") {
  CHECK(gru_parameter_count(1, {1}, 1) == 14);
  CHECK(GruNetwork::zeros(4, {}, 1).parameter_count() == 5);
  CHECK(gru_parameter_count(257, {64, 64}, 1) == 87041);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 9), depth(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t in = dim(rng), out = dim(rng);
    std::vector<std::size_t> hidden(depth(rng));
    for (auto& h : hidden) h = dim(rng);
    const auto net = GruNetwork::zeros(in, hidden, out);
    std::size_t stored = 0;
    for (const auto& l : net.layers())
      stored += l.w_ih.size() + l.w_hh.size() + l.b_ih.size() + l.b_hh.size();
    stored += net.head().weight.size() + net.head().bias.size();
    CHECK(net.parameter_count() == stored);
    CHECK(net.flatten().size() == stored);
    CHECK(gru_parameter_count(in, hidden, out) == stored);
  }
}

TEST_CASE("step flops") {
  // 6 h (in + h) + 21 h per layer, 2 in out + 4 out for the head.
  CHECK(gru_step_flops(257, {64, 64}, 1) == 124608 + 50496 + 132);
  CHECK(GruNetwork::zeros(3, {2}, 1).step_flops() == gru_step_flops(3, {2}, 1));
  OpCounter c;
  const auto net = scalar_net();
  GruStream s(net);
  s.step(std::vector<double>{0.1}, &c, Stage::Mask);
  CHECK(c.get(Stage::Mask) == gru_step_flops(1, {1}, 1));
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(GruNetwork({GruLayer::zeros(3, 4), GruLayer::zeros(5, 2)}, LinearLayer::zeros(2, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(GruNetwork({GruLayer::zeros(3, 4)}, LinearLayer::zeros(3, 1)), std::invalid_argument);
  const auto net = GruNetwork::zeros(3, {2}, 1);
  CHECK_THROWS_AS(gru_forward(net, {{1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("weights file round trip") {
  const auto dir = testing::scratch_dir("gru");
  std::mt19937_64 rng(4);
  const auto net = random_net(rng, 7, {5, 3}, 2);
  save_gru(net, dir / "net.json");
  CHECK(std::filesystem::exists(dir / "net.bin"));
  const auto back = load_gru(dir / "net.json");
  CHECK(back.flatten() == net.flatten());
  CHECK(back.parameter_count() == net.parameter_count());

  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"format": "audioroi-gru", "version": 1, "input_size": 7,
              "layers": [{"hidden_size": 5}], "output_size": 2, "blob": "net.bin"})";
  }
  CHECK_THROWS(load_gru(dir / "bad.json"));  // blob size disagrees with the shape
  CHECK_THROWS(load_gru(dir / "missing.json"));
}

}  // TEST_SUITE
