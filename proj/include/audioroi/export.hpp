// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "audioroi/ssl.hpp"

namespace audioroi::app {

/// Min-max normalized 8-bit gray levels, row-major. A constant image maps to 0.
std::vector<std::uint8_t> acoustic_image_gray(const ssl::AcousticImage& image);

/// One line per grid row, comma-separated energies printed with 17
/// significant digits so they parse back exactly.
std::string acoustic_image_csv(const ssl::AcousticImage& image);
ssl::AcousticImage parse_acoustic_image_csv(const std::string& text);
ssl::AcousticImage read_acoustic_image_csv(const std::filesystem::path& path);

/// Writes <stem>.pgm (binary P5, one pixel per region scaled up by
/// `cell_px`) and <stem>.csv next to `path`. Rewriting gives identical files.
void render_acoustic_image(const ssl::AcousticImage& image,
                           const std::filesystem::path& path,
                           std::size_t cell_px = 1);

}  // namespace audioroi::app
