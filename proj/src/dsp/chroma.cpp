#include "earreact/dsp/chroma.hpp"

#include <cmath>
#include <cstdlib>

#include "earreact/core/errors.hpp"

namespace earreact::dsp {

Chroma Chroma::pitch_class(int value) {
  if (value < 0 || value > 11) {
    throw ParameterError("pitch class out of range: " + std::to_string(value));
  }
  return Chroma(static_cast<std::int8_t>(value));
}

std::string Chroma::to_string() const { return voiced() ? std::to_string(value_) : "U"; }

Chroma hz_to_chroma(double f0_hz, double confidence, double conf_threshold) {
  if (confidence < conf_threshold) return Chroma::unvoiced();
  if (!(f0_hz > 0.0) || !std::isfinite(f0_hz)) {
    throw ParameterError("voiced pitch must be positive, got " + std::to_string(f0_hz));
  }
  const long note = std::lround(12.0 * std::log2(f0_hz / 440.0)) + 69;
  const long pc = ((note % 12) + 12) % 12;
  return Chroma::pitch_class(static_cast<int>(pc));
}

double chroma_cost(Chroma a, Chroma b) {
  if (!a.voiced() && !b.voiced()) return 0.0;
  if (a.voiced() != b.voiced()) return 6.0;
  const int d = std::abs(a.value() - b.value());
  return static_cast<double>(std::min(d, 12 - d));
}

}  // namespace earreact::dsp
