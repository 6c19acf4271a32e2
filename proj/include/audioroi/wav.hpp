// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>

#include "audioroi/audio.hpp"

namespace audioroi {

enum class SampleFormat { Pcm16, Float32 };

/// Reads PCM16 or IEEE float32 RIFF/WAVE with 1-8 channels. When
/// `expected_rate` is set, a different file rate is an error (no resampling).
AudioClip read_wav(const std::filesystem::path& path,
                   std::optional<double> expected_rate = std::nullopt);

void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               SampleFormat format = SampleFormat::Float32);

}  // namespace audioroi
