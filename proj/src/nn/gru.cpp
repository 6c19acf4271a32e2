// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/gru.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace audioroi::nn {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per step: two matrix-vector products (2 flops per MAC), two bias adds,
// the r/z pre-activation sum, 2 sigmoids at 3 ops, r * (.), the n sum,
// tanh, and 4 ops for the state blend.
std::uint64_t layer_step_flops(std::size_t in, std::size_t h) {
  return 6 * h * (in + h) + 6 * h + 2 * h + 6 * h + 2 * h + h + 4 * h;
}

std::uint64_t head_flops(std::size_t in, std::size_t out) {
  return 2 * in * out + out + 3 * out;
}

template <typename Mat>
void append_row_major(std::vector<float>& out, const Mat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(static_cast<float>(m(r, c)));
}

template <typename Mat>
void read_row_major(Mat& m, const std::vector<float>& blob, std::size_t& pos) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = blob[pos++];
}

}  // namespace

GruLayer GruLayer::zeros(std::size_t input_size, std::size_t hidden_size) {
  const auto in = static_cast<Eigen::Index>(input_size);
  const auto h = static_cast<Eigen::Index>(hidden_size);
  return {Eigen::MatrixXd::Zero(3 * h, in), Eigen::MatrixXd::Zero(3 * h, h),
          Eigen::VectorXd::Zero(3 * h), Eigen::VectorXd::Zero(3 * h)};
}

LinearLayer LinearLayer::zeros(std::size_t input_size, std::size_t output_size) {
  const auto in = static_cast<Eigen::Index>(input_size);
  const auto out = static_cast<Eigen::Index>(output_size);
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

GruNetwork::GruNetwork(std::vector<GruLayer> layers, LinearLayer head)
    : layers_(std::move(layers)), head_(std::move(head)) {
  std::size_t expected_in = layers_.empty() ? head_.input_size()
                                            : layers_.front().input_size();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const auto h = static_cast<Eigen::Index>(l.hidden_size());
    if (l.hidden_size() == 0)
      throw std::invalid_argument("GRU layer with zero hidden units");
    if (l.input_size() != expected_in)
      throw std::invalid_argument("GRU layer " + std::to_string(i) +
                                  " input size does not chain");
    if (l.w_ih.rows() != 3 * h || l.w_hh.rows() != 3 * h ||
        l.b_ih.size() != 3 * h || l.b_hh.size() != 3 * h)
      throw std::invalid_argument("GRU layer " + std::to_string(i) +
                                  " has inconsistent gate shapes");
    expected_in = l.hidden_size();
  }
  if (head_.input_size() != expected_in)
    throw std::invalid_argument("linear head input does not match last layer");
  if (head_.output_size() == 0 ||
      head_.bias.size() != static_cast<Eigen::Index>(head_.output_size()))
    throw std::invalid_argument("linear head has inconsistent shape");
  if (input_size() == 0) throw std::invalid_argument("network input is empty");
}

GruNetwork GruNetwork::zeros(std::size_t input_size,
                             const std::vector<std::size_t>& hidden_sizes,
                             std::size_t output_size) {
  std::vector<GruLayer> layers;
  std::size_t in = input_size;
  for (std::size_t h : hidden_sizes) {
    layers.push_back(GruLayer::zeros(in, h));
    in = h;
  }
  return GruNetwork(std::move(layers), LinearLayer::zeros(in, output_size));
}

std::size_t GruNetwork::input_size() const {
  return layers_.empty() ? head_.input_size() : layers_.front().input_size();
}

std::size_t GruNetwork::parameter_count() const {
  std::vector<std::size_t> hidden;
  for (const auto& l : layers_) hidden.push_back(l.hidden_size());
  return gru_parameter_count(input_size(), hidden, output_size());
}

std::uint64_t GruNetwork::step_flops() const {
  std::vector<std::size_t> hidden;
  for (const auto& l : layers_) hidden.push_back(l.hidden_size());
  return gru_step_flops(input_size(), hidden, output_size());
}

std::vector<float> GruNetwork::flatten() const {
  std::vector<float> out;
  for (const auto& l : layers_) {
    append_row_major(out, l.w_ih);
    append_row_major(out, l.w_hh);
    append_row_major(out, l.b_ih);
    append_row_major(out, l.b_hh);
  }
  append_row_major(out, head_.weight);
  append_row_major(out, head_.bias);
  return out;
}

std::uint64_t gru_step_flops(std::size_t input_size,
                             const std::vector<std::size_t>& hidden_sizes,
                             std::size_t output_size) {
  std::uint64_t total = 0;
  std::size_t in = input_size;
  for (std::size_t h : hidden_sizes) {
    total += layer_step_flops(in, h);
    in = h;
  }
  return total + head_flops(in, output_size);
}

std::size_t gru_parameter_count(std::size_t input_size,
                                const std::vector<std::size_t>& hidden_sizes,
                                std::size_t output_size) {
  std::size_t total = 0;
  std::size_t in = input_size;
  for (std::size_t h : hidden_sizes) {
    total += 3 * (in * h + h * h + 2 * h);
    in = h;
  }
  return total + in * output_size + output_size;
}

GruStream::GruStream(const GruNetwork& net) : net_(&net) { reset(); }

void GruStream::reset() {
  hidden_.clear();
  for (const auto& l : net_->layers())
    hidden_.push_back(
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l.hidden_size())));
}

std::vector<double> GruStream::step(std::span<const double> input,
                                    OpCounter* counter, Stage stage) {
  if (input.size() != net_->input_size())
    throw std::invalid_argument(
        "GRU input has " + std::to_string(input.size()) +
        " features, network expects " + std::to_string(net_->input_size()));

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      input.data(), static_cast<Eigen::Index>(input.size()));
  for (std::size_t i = 0; i < net_->layers().size(); ++i) {
    const auto& l = net_->layers()[i];
    const auto h = static_cast<Eigen::Index>(l.hidden_size());
    Eigen::VectorXd& state = hidden_[i];
    const Eigen::VectorXd gi = l.w_ih * x + l.b_ih;
    const Eigen::VectorXd gh = l.w_hh * state + l.b_hh;
    Eigen::VectorXd next(h);
    for (Eigen::Index j = 0; j < h; ++j) {
      const double r = sigmoid(gi(j) + gh(j));
      const double z = sigmoid(gi(h + j) + gh(h + j));
      const double n = std::tanh(gi(2 * h + j) + r * gh(2 * h + j));
      next(j) = (1.0 - z) * state(j) + z * n;
    }
    state = next;
    x = state;
  }
  const Eigen::VectorXd logits = net_->head().weight * x + net_->head().bias;
  std::vector<double> out(static_cast<std::size_t>(logits.size()));
  for (Eigen::Index j = 0; j < logits.size(); ++j) out[j] = sigmoid(logits(j));
  charge(counter, stage, net_->step_flops());
  return out;
}

std::vector<std::vector<double>> gru_forward(
    const GruNetwork& net, const std::vector<std::vector<double>>& features,
    OpCounter* counter, Stage stage) {
  GruStream stream(net);
  std::vector<std::vector<double>> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(stream.step(f, counter, stage));
  return out;
}

GruNetwork load_gru(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error(manifest.string() + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(manifest.string() + ": " + e.what());
  }
  if (j.value("format", "") != "audioroi-gru" || j.value("version", 0) != 1)
    throw std::runtime_error(manifest.string() +
                             ": not an audioroi-gru v1 manifest");

  const auto input_size = j.at("input_size").get<std::size_t>();
  const auto output_size = j.at("output_size").get<std::size_t>();
  std::vector<std::size_t> hidden;
  for (const auto& l : j.at("layers")) hidden.push_back(l.at("hidden_size"));

  auto net = GruNetwork::zeros(input_size, hidden, output_size);
  const std::size_t count = net.parameter_count();

  const auto blob_path =
      manifest.parent_path() / j.at("blob").get<std::string>();
  std::ifstream bin(blob_path, std::ios::binary);
  if (!bin) throw std::runtime_error(blob_path.string() + ": cannot open");
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(bin)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() != count * 4)
    throw std::runtime_error(
        blob_path.string() + ": expected " + std::to_string(count * 4) +
        " bytes for " + std::to_string(count) + " parameters, found " +
        std::to_string(raw.size()));

  std::vector<float> blob(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* p = raw.data() + 4 * i;
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    blob[i] = std::bit_cast<float>(bits);
  }

  std::vector<GruLayer> layers = net.layers();
  LinearLayer head = net.head();
  std::size_t pos = 0;
  for (auto& l : layers) {
    read_row_major(l.w_ih, blob, pos);
    read_row_major(l.w_hh, blob, pos);
    read_row_major(l.b_ih, blob, pos);
    read_row_major(l.b_hh, blob, pos);
  }
  read_row_major(head.weight, blob, pos);
  read_row_major(head.bias, blob, pos);
  return GruNetwork(std::move(layers), std::move(head));
}

void save_gru(const GruNetwork& net, const std::filesystem::path& manifest) {
  auto blob_path = manifest;
  blob_path.replace_extension(".bin");

  nlohmann::json j;
  j["format"] = "audioroi-gru";
  j["version"] = 1;
  j["input_size"] = net.input_size();
  j["output_size"] = net.output_size();
  j["layers"] = nlohmann::json::array();
  for (const auto& l : net.layers())
    j["layers"].push_back({{"hidden_size", l.hidden_size()}});
  j["gate_order"] = "reset,update,new";
  j["dtype"] = "float32-le";
  j["blob"] = blob_path.filename().string();

  std::ofstream m(manifest);
  if (!m) throw std::runtime_error(manifest.string() + ": cannot write");
  m << j.dump(2) << '\n';

  std::vector<unsigned char> raw;
  for (float v : net.flatten()) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) raw.push_back((bits >> (8 * i)) & 0xFF);
  }
  std::ofstream b(blob_path, std::ios::binary);
  if (!b) throw std::runtime_error(blob_path.string() + ": cannot write");
  b.write(reinterpret_cast<const char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
}

}  // namespace audioroi::nn
