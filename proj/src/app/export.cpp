// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace audioroi::app {
namespace {

void check_image(const ssl::AcousticImage& image) {
  if (image.dims.size() == 0 || image.energies.size() != image.dims.size())
    throw std::invalid_argument("acoustic image size does not match its grid");
  for (double e : image.energies)
    if (!std::isfinite(e)) throw std::invalid_argument("acoustic image has non-finite energy");
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

std::vector<std::uint8_t> acoustic_image_gray(const ssl::AcousticImage& image) {
  check_image(image);
  const auto [lo, hi] = std::minmax_element(image.energies.begin(), image.energies.end());
  const double range = *hi - *lo;
  std::vector<std::uint8_t> gray(image.energies.size(), 0);
  if (!(range > 0.0)) return gray;
  for (std::size_t i = 0; i < gray.size(); ++i)
    gray[i] = static_cast<std::uint8_t>(std::lround(255.0 * (image.energies[i] - *lo) / range));
  return gray;
}

std::string acoustic_image_csv(const ssl::AcousticImage& image) {
  check_image(image);
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < image.dims.rows; ++r) {
    for (std::size_t c = 0; c < image.dims.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", image.energies[r * image.dims.cols + c]);
      if (c > 0) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

ssl::AcousticImage parse_acoustic_image_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> energies;
  std::size_t cols = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t n = 0;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw std::invalid_argument("bad CSV value '" + cell + "' on row " +
                                    std::to_string(rows));
      energies.push_back(v);
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols) throw std::invalid_argument("ragged CSV row " + std::to_string(rows));
    ++rows;
  }
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty acoustic image CSV");
  return ssl::AcousticImage::from_energies({cols, rows}, std::move(energies));
}

ssl::AcousticImage read_acoustic_image_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_acoustic_image_csv(ss.str());
}

void render_acoustic_image(const ssl::AcousticImage& image,
                           const std::filesystem::path& path, std::size_t cell_px) {
  if (cell_px == 0) throw std::invalid_argument("cell size must be >= 1");
  const auto gray = acoustic_image_gray(image);
  const std::size_t w = image.dims.cols * cell_px;
  const std::size_t h = image.dims.rows * cell_px;
  std::string pgm = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  pgm.reserve(pgm.size() + w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      pgm += static_cast<char>(gray[(y / cell_px) * image.dims.cols + x / cell_px]);

  auto stem = path;
  if (stem.extension() == ".pgm" || stem.extension() == ".csv") stem.replace_extension();
  auto pgm_path = stem;
  pgm_path += ".pgm";
  auto csv_path = stem;
  csv_path += ".csv";
  write_file(pgm_path, pgm);
  write_file(csv_path, acoustic_image_csv(image));
}

}  // namespace audioroi::app
