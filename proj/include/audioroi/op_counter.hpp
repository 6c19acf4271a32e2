// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace audioroi {

/// Pipeline stages that floating-point work is attributed to.
/// Frontend is the channel-0 STFT that the gatekeeper always needs;
/// the STFT of the remaining channels is charged to Ssl.
enum class Stage : std::size_t { Frontend, Vad, Mask, Ssl, Roi, Detector };

inline constexpr std::size_t kStageCount = 6;
inline constexpr std::array<Stage, kStageCount> kAllStages = {
    Stage::Frontend, Stage::Vad, Stage::Mask,
    Stage::Ssl,      Stage::Roi, Stage::Detector};

std::string_view stage_name(Stage stage);

/// Plain copyable snapshot of an OpCounter.
struct OpCounts {
  std::array<std::uint64_t, kStageCount> flops{};

  std::uint64_t operator[](Stage s) const {
    return flops[static_cast<std::size_t>(s)];
  }
  std::uint64_t total() const;
  std::uint64_t pipeline_total() const;  // everything except Detector
  OpCounts& operator+=(const OpCounts& other);
};

/// Analytic FLOP accumulator. Counts only grow until reset().
class OpCounter {
 public:
  OpCounter() = default;
  OpCounter(const OpCounter&) = delete;
  OpCounter& operator=(const OpCounter&) = delete;

  void add(Stage stage, std::uint64_t flops) noexcept;
  std::uint64_t get(Stage stage) const noexcept;
  std::uint64_t total() const noexcept;
  OpCounts snapshot() const noexcept;
  void reset() noexcept;

 private:
  std::array<std::atomic<std::uint64_t>, kStageCount> counts_{};
};

inline void charge(OpCounter* counter, Stage stage, std::uint64_t flops) {
  if (counter != nullptr) counter->add(stage, flops);
}

// Operation-count models. Transcendentals (exp, tanh, cos, sin, log, sqrt)
// count as one operation each.
namespace flops {

/// Real-input FFT of length n: 2.5 n log2 n (half of the radix-2 complex cost).
std::uint64_t real_fft(std::size_t n);
/// Complex FFT of length n: 5 n log2 n.
std::uint64_t complex_fft(std::size_t n);
/// One STFT frame: window multiply plus real FFT.
std::uint64_t stft_frame(std::size_t frame_size);
/// log(|X| + eps) over `bins` complex values: 6 per bin.
std::uint64_t log_magnitude(std::size_t bins);

}  // namespace flops

}  // namespace audioroi
