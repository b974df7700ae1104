#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace earreact::dsp {

/// Pitch class 0 (C) .. 11 (B), or unvoiced.
class Chroma {
 public:
  static constexpr Chroma unvoiced() { return Chroma(); }
  /// Throws ParameterError outside 0..11.
  static Chroma pitch_class(int value);

  constexpr Chroma() = default;
  bool voiced() const { return value_ >= 0; }
  /// Pitch class; only meaningful when voiced().
  int value() const { return value_; }

  /// "0".."11" or "U".
  std::string to_string() const;
  friend bool operator==(Chroma, Chroma) = default;

 private:
  explicit constexpr Chroma(std::int8_t v) : value_(v) {}
  std::int8_t value_ = -1;
};

/// One symbol per 0.1 s.
using ChromaSeq = std::vector<Chroma>;

/// Nearest 12-TET note n = round(12 log2(f0 / 440)) + 69, folded to n mod 12.
/// Unvoiced when confidence < conf_threshold. Throws ParameterError for a
/// non-positive f0 at or above the threshold.
Chroma hz_to_chroma(double f0_hz, double confidence, double conf_threshold = 0.5);

/// Local cost between chroma symbols: circular semitone distance for voiced
/// pairs, 0 for two unvoiced symbols, 6 for voiced vs unvoiced.
double chroma_cost(Chroma a, Chroma b);

}  // namespace earreact::dsp
