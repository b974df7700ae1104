#include "earreact/core/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "earreact/core/errors.hpp"

namespace earreact {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}
void put16(std::ofstream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

WavAudio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError(path.string() + ": not a RIFF/WAVE file");
  }

  WavAudio wav;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes.data() + pos + 4);
    const unsigned char* body = bytes.data() + pos + 8;
    if (pos + 8 + size > bytes.size()) throw ParseError(path.string() + ": truncated chunk");
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (size < 16) throw ParseError(path.string() + ": short fmt chunk");
      const auto format = le16(body);
      const auto channels = le16(body + 2);
      const auto bits = le16(body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ParseError(path.string() + ": only mono 16-bit PCM is supported");
      }
      wav.rate_hz = le32(body + 4);
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      if (!have_fmt) throw ParseError(path.string() + ": data chunk before fmt chunk");
      wav.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(body + 2 * i));
        wav.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      return wav;
    }
    pos += 8 + size + (size & 1u);
  }
  throw ParseError(path.string() + ": no data chunk");
}

void write_wav(const std::filesystem::path& path, std::span<const float> samples, double rate_hz) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  const auto rate = static_cast<std::uint32_t>(std::lround(rate_hz));
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_bytes);
  std::vector<unsigned char> buf(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const float x = std::clamp(samples[i], -1.0f, 1.0f);
    const auto v = static_cast<std::int16_t>(std::clamp(std::lround(x * 32767.0f), -32768L, 32767L));
    const auto u = static_cast<std::uint16_t>(v);
    buf[2 * i] = static_cast<unsigned char>(u);
    buf[2 * i + 1] = static_cast<unsigned char>(u >> 8);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace earreact
