#pragma once

#include <array>
#include <span>
#include <vector>

namespace earreact::dsp {

/// Population standard deviation of the accelerometer magnitude, in g.
/// Throws InsufficientDataError for fewer than two samples.
double movement_level(std::span<const std::array<double, 3>> accel);

inline constexpr double kDbEpsilon = 1e-12;

/// 20 log10(rms + 1e-12) + calibration_db. Throws ParameterError on an empty window.
double sound_level_db(std::span<const float> audio, double calibration_db = 94.0);

/// First-order Butterworth low-pass (bilinear transform, cutoff pre-warped).
/// The filter state starts at rest on the first sample, so a constant input
/// passes through unchanged. Throws ParameterError unless
/// 0 < cutoff_hz < sample_rate_hz / 2.
class FirstOrderLowPass {
 public:
  FirstOrderLowPass(double sample_rate_hz, double cutoff_hz);

  std::vector<double> apply(std::span<const double> signal) const;
  std::vector<float> apply(std::span<const float> signal) const;

  double b0() const { return b0_; }
  double a1() const { return a1_; }

 private:
  template <typename T>
  std::vector<T> run(std::span<const T> signal) const;

  double b0_;  // b1 == b0
  double a1_;
};

std::vector<double> lowpass_first_order(std::span<const double> signal, double sample_rate_hz,
                                        double cutoff_hz);
std::vector<float> lowpass_first_order(std::span<const float> signal, double sample_rate_hz,
                                       double cutoff_hz);

/// Kaiser-windowed sinc resampler. Output length is round(n * to / from); each
/// output sample is normalized by the sum of its kernel taps, so DC passes
/// exactly. Throws ParameterError for non-positive rates.
class Resampler {
 public:
  Resampler(double from_hz, double to_hz, int zero_crossings = 16, double kaiser_beta = 8.0);

  std::vector<float> process(std::span<const float> input) const;

 private:
  double from_hz_;
  double to_hz_;
  double cutoff_;      // normalized to the input rate, cycles/sample
  double half_width_;  // in input samples
  double beta_;
  double i0_beta_;
  // Polyphase taps for integer rate pairs: one kernel per output phase.
  long long up_ = 0;
  long long down_ = 0;
  std::vector<std::vector<double>> phase_taps_;
  std::vector<long long> phase_first_;

  double kernel(double offset) const;
};

std::vector<float> resample(std::span<const float> audio, double from_hz = 44100.0,
                            double to_hz = 16000.0);

}  // namespace earreact::dsp
