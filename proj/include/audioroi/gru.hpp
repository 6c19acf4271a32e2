// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "audioroi/op_counter.hpp"

namespace audioroi::nn {

/// One GRU layer. Gate rows are stacked in the order [reset; update; new],
/// each block hidden_size rows tall.
struct GruLayer {
  Eigen::MatrixXd w_ih;  // 3h x in
  Eigen::MatrixXd w_hh;  // 3h x h
  Eigen::VectorXd b_ih;  // 3h
  Eigen::VectorXd b_hh;  // 3h

  std::size_t input_size() const { return static_cast<std::size_t>(w_ih.cols()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(w_hh.cols()); }

  static GruLayer zeros(std::size_t input_size, std::size_t hidden_size);
};

struct LinearLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out

  std::size_t input_size() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t output_size() const { return static_cast<std::size_t>(weight.rows()); }

  static LinearLayer zeros(std::size_t input_size, std::size_t output_size);
};

/// Stacked GRU layers followed by a linear head and an elementwise sigmoid.
///
/// Per layer and time step, with x the layer input and h the previous state:
///
///   r  = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
///   z  = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
///   n  = tanh(W_in x + b_in + r * (W_hn h + b_hn))
///   h' = (1 - z) * h + z * n
///
/// The update gate z weights the candidate n. Weights exported from a
/// framework that uses h' = (1 - z) * n + z * h (PyTorch) need their update
/// gate rows and biases negated. Hidden states start at zero.
class GruNetwork {
 public:
  GruNetwork(std::vector<GruLayer> layers, LinearLayer head);

  /// All-zero parameters with the given shape.
  static GruNetwork zeros(std::size_t input_size,
                          const std::vector<std::size_t>& hidden_sizes,
                          std::size_t output_size);

  std::size_t input_size() const;
  std::size_t output_size() const { return head_.output_size(); }
  const std::vector<GruLayer>& layers() const { return layers_; }
  const LinearLayer& head() const { return head_; }

  /// sum over layers of 3 (in h + h h + 2 h), plus h_last out + out.
  std::size_t parameter_count() const;

  /// Analytic FLOPs of one time step through all layers and the head.
  std::uint64_t step_flops() const;

  /// Every stored scalar in file order (per layer: w_ih, w_hh, b_ih, b_hh,
  /// row-major; then head weight, head bias).
  std::vector<float> flatten() const;

 private:
  std::vector<GruLayer> layers_;
  LinearLayer head_;
};

/// FLOPs of one step for a network of this shape; usable without weights.
std::uint64_t gru_step_flops(std::size_t input_size,
                             const std::vector<std::size_t>& hidden_sizes,
                             std::size_t output_size);

std::size_t gru_parameter_count(std::size_t input_size,
                                const std::vector<std::size_t>& hidden_sizes,
                                std::size_t output_size);

/// Streaming inference state for one input stream.
class GruStream {
 public:
  explicit GruStream(const GruNetwork& net);
  explicit GruStream(const GruNetwork&&) = delete;  // keeps a pointer to net

  /// Advances one frame and returns the sigmoid outputs.
  std::vector<double> step(std::span<const double> input,
                           OpCounter* counter = nullptr,
                           Stage stage = Stage::Vad);
  void reset();

 private:
  const GruNetwork* net_;
  std::vector<Eigen::VectorXd> hidden_;
};

/// Runs a fresh stream over all frames. Output [frame][output].
std::vector<std::vector<double>> gru_forward(
    const GruNetwork& net, const std::vector<std::vector<double>>& features,
    OpCounter* counter = nullptr, Stage stage = Stage::Vad);

/// Loads a JSON manifest plus its little-endian float32 blob.
///
/// Manifest fields: "format": "audioroi-gru", "version": 1, "input_size",
/// "layers": [{"hidden_size": h}, ...], "output_size", "blob" (path relative
/// to the manifest). Blob contents follow GruNetwork::flatten() order.
GruNetwork load_gru(const std::filesystem::path& manifest);

/// Writes `manifest` and a sibling blob named after it with a .bin suffix.
void save_gru(const GruNetwork& net, const std::filesystem::path& manifest);

}  // namespace audioroi::nn
