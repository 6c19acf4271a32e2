// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/op_counter.hpp"

#include <bit>
#include <cmath>

namespace audioroi {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::Frontend: return "frontend";
    case Stage::Vad: return "vad";
    case Stage::Mask: return "mask";
    case Stage::Ssl: return "ssl";
    case Stage::Roi: return "roi";
    case Stage::Detector: return "detector";
  }
  return "unknown";
}

std::uint64_t OpCounts::total() const {
  std::uint64_t sum = 0;
  for (auto f : flops) sum += f;
  return sum;
}

std::uint64_t OpCounts::pipeline_total() const {
  return total() - (*this)[Stage::Detector];
}

OpCounts& OpCounts::operator+=(const OpCounts& other) {
  for (std::size_t i = 0; i < kStageCount; ++i) flops[i] += other.flops[i];
  return *this;
}

void OpCounter::add(Stage stage, std::uint64_t flops) noexcept {
  counts_[static_cast<std::size_t>(stage)].fetch_add(
      flops, std::memory_order_relaxed);
}

std::uint64_t OpCounter::get(Stage stage) const noexcept {
  return counts_[static_cast<std::size_t>(stage)].load(
      std::memory_order_relaxed);
}

std::uint64_t OpCounter::total() const noexcept {
  return snapshot().total();
}

OpCounts OpCounter::snapshot() const noexcept {
  OpCounts out;
  for (std::size_t i = 0; i < kStageCount; ++i)
    out.flops[i] = counts_[i].load(std::memory_order_relaxed);
  return out;
}

void OpCounter::reset() noexcept {
  for (auto& c : counts_) c.store(0, std::memory_order_relaxed);
}

namespace flops {

namespace {
double log2_size(std::size_t n) {
  return n <= 1 ? 0.0 : std::log2(static_cast<double>(n));
}
}  // namespace

std::uint64_t real_fft(std::size_t n) {
  return static_cast<std::uint64_t>(
      std::llround(2.5 * static_cast<double>(n) * log2_size(n)));
}

std::uint64_t complex_fft(std::size_t n) {
  return static_cast<std::uint64_t>(
      std::llround(5.0 * static_cast<double>(n) * log2_size(n)));
}

std::uint64_t stft_frame(std::size_t frame_size) {
  return frame_size + real_fft(frame_size);
}

std::uint64_t log_magnitude(std::size_t bins) { return 6 * static_cast<std::uint64_t>(bins); }

}  // namespace flops
}  // namespace audioroi
