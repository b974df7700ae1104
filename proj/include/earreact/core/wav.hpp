#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace earreact {

struct WavAudio {
  std::vector<float> samples;  // in [-1, 1]
  double rate_hz = 44100.0;
};

/// Reads a mono 16-bit PCM RIFF/WAVE file. Throws ParseError otherwise.
WavAudio read_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM; samples are clipped to [-1, 1] and rounded.
void write_wav(const std::filesystem::path& path, std::span<const float> samples,
               double rate_hz);

}  // namespace earreact
