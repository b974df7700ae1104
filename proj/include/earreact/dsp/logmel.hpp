#pragma once

#include <array>
#include <span>
#include <vector>

namespace earreact::dsp {

inline constexpr std::size_t kPatchFrames = 96;
inline constexpr std::size_t kMelBands = 64;
inline constexpr std::size_t kLogMelInputSamples = 16000;
inline constexpr double kLogMelSampleRate = 16000.0;
inline constexpr std::size_t kStftWindow = 400;  // 25 ms
inline constexpr std::size_t kStftHop = 160;     // 10 ms
inline constexpr std::size_t kFftLength = 512;
inline constexpr double kMelLowHz = 125.0;
inline constexpr double kMelHighHz = 7500.0;
inline constexpr double kLogOffset = 0.001;

/// 96 frames x 64 mel bands of log mel magnitudes, row-major by frame.
class LogMelPatch {
 public:
  LogMelPatch() : values_(kPatchFrames * kMelBands, 0.0) {}

  double at(std::size_t frame, std::size_t band) const { return values_[frame * kMelBands + band]; }
  double& at(std::size_t frame, std::size_t band) { return values_[frame * kMelBands + band]; }

  static constexpr std::size_t frames() { return kPatchFrames; }
  static constexpr std::size_t bands() { return kMelBands; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const LogMelPatch&, const LogMelPatch&) = default;

 private:
  std::vector<double> values_;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular HTK-mel weights, kFftLength/2+1 rows (DC row zero) by 64 bands.
const std::vector<std::array<double, kMelBands>>& mel_weight_matrix();

/// STFT (400-sample periodic Hann, hop 160, 512-point FFT) -> magnitude ->
/// 64-band mel filterbank over 125-7500 Hz -> log(x + 0.001), keeping the
/// first 96 of the 98 frames. Input: exactly one second at 16 kHz.
/// Throws ParameterError on any other length.
LogMelPatch log_mel_patch(std::span<const float> audio_1s_16k);

}  // namespace earreact::dsp
