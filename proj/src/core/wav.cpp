// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "audioroi/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace audioroi {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr std::size_t kMaxChannels = 8;

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path,
                   std::optional<double> expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(path, "not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) fail(path, "truncated fmt chunk");
      format = get_u16(chunk + 8);
      channels = get_u16(chunk + 10);
      rate = get_u32(chunk + 12);
      bits = get_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 40) fail(path, "truncated extensible fmt chunk");
        format = get_u16(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }

  if (channels == 0 || rate == 0) fail(path, "missing fmt chunk");
  if (data == nullptr) fail(path, "missing data chunk");
  if (channels > kMaxChannels)
    fail(path, "unsupported channel count " + std::to_string(channels));
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32)
    fail(path, "unsupported sample format (need PCM16 or float32)");
  if (expected_rate && static_cast<double>(rate) != *expected_rate)
    fail(path, "sample rate " + std::to_string(rate) + " Hz does not match " +
                   std::to_string(static_cast<long>(*expected_rate)) + " Hz");

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  std::vector<std::vector<double>> out(channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (i * channels + c) * width;
      if (pcm16) {
        out[c][i] = static_cast<std::int16_t>(get_u16(p)) / 32768.0;
      } else {
        out[c][i] = std::bit_cast<float>(get_u32(p));
      }
    }
  }
  return AudioClip(std::move(out), static_cast<double>(rate));
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               SampleFormat format) {
  const std::size_t channels = clip.num_channels();
  if (channels > kMaxChannels)
    fail(path, "cannot write more than 8 channels");
  const double rate_d = clip.sample_rate();
  if (rate_d != std::floor(rate_d))
    fail(path, "sample rate must be an integer number of Hz");
  const auto rate = static_cast<std::uint32_t>(rate_d);
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::size_t width = bits / 8;
  const std::size_t data_size = clip.length() * channels * width;

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, rate);
  put_u32(out, static_cast<std::uint32_t>(rate * channels * width));
  put_u16(out, static_cast<std::uint16_t>(channels * width));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_size));

  for (std::size_t i = 0; i < clip.length(); ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = clip.channel(c)[i];
      if (format == SampleFormat::Pcm16) {
        const double scaled = std::clamp(std::round(v * 32768.0), -32768.0,
                                         32767.0);
        put_u16(out, static_cast<std::uint16_t>(
                         static_cast<std::int16_t>(scaled)));
      } else {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for writing");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) fail(path, "write failed");
}

}  // namespace audioroi
