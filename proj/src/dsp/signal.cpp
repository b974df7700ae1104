#include "earreact/dsp/signal.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "earreact/core/errors.hpp"

namespace earreact::dsp {

double movement_level(std::span<const std::array<double, 3>> accel) {
  if (accel.size() < 2) {
    throw InsufficientDataError("movement level needs at least 2 accelerometer samples");
  }
  double sum = 0.0;
  std::vector<double> mags;
  mags.reserve(accel.size());
  for (const auto& a : accel) {
    mags.push_back(std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]));
    sum += mags.back();
  }
  const double mean = sum / static_cast<double>(mags.size());
  double ss = 0.0;
  for (double m : mags) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / static_cast<double>(mags.size()));
}

double sound_level_db(std::span<const float> audio, double calibration_db) {
  if (audio.empty()) throw ParameterError("sound level of an empty window");
  double ss = 0.0;
  for (float x : audio) ss += static_cast<double>(x) * x;
  const double rms = std::sqrt(ss / static_cast<double>(audio.size()));
  return 20.0 * std::log10(rms + kDbEpsilon) + calibration_db;
}

FirstOrderLowPass::FirstOrderLowPass(double sample_rate_hz, double cutoff_hz) {
  if (!(sample_rate_hz > 0) || !(cutoff_hz > 0) || !(cutoff_hz < sample_rate_hz / 2)) {
    throw ParameterError("low-pass cutoff must lie in (0, sample_rate / 2)");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  b0_ = k / (1.0 + k);
  a1_ = (k - 1.0) / (k + 1.0);
}

template <typename T>
std::vector<T> FirstOrderLowPass::run(std::span<const T> signal) const {
  std::vector<T> out(signal.size());
  if (signal.empty()) return out;
  double x_prev = signal[0];
  double y_prev = signal[0];
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double x = signal[i];
    const double y = b0_ * (x + x_prev) - a1_ * y_prev;
    out[i] = static_cast<T>(y);
    x_prev = x;
    y_prev = y;
  }
  return out;
}

std::vector<double> FirstOrderLowPass::apply(std::span<const double> signal) const {
  return run(signal);
}
std::vector<float> FirstOrderLowPass::apply(std::span<const float> signal) const {
  return run(signal);
}

std::vector<double> lowpass_first_order(std::span<const double> signal, double sample_rate_hz,
                                        double cutoff_hz) {
  return FirstOrderLowPass(sample_rate_hz, cutoff_hz).apply(signal);
}
std::vector<float> lowpass_first_order(std::span<const float> signal, double sample_rate_hz,
                                       double cutoff_hz) {
  return FirstOrderLowPass(sample_rate_hz, cutoff_hz).apply(signal);
}

namespace {

double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

bool is_integral(double v) { return std::floor(v) == v && v < 1e9; }

}  // namespace

Resampler::Resampler(double from_hz, double to_hz, int zero_crossings, double kaiser_beta)
    : from_hz_(from_hz), to_hz_(to_hz), beta_(kaiser_beta), i0_beta_(bessel_i0(kaiser_beta)) {
  if (!(from_hz > 0) || !(to_hz > 0)) throw ParameterError("resample rates must be positive");
  if (zero_crossings < 1) throw ParameterError("resampler needs at least one zero crossing");
  const double ratio = std::min(1.0, to_hz / from_hz);
  cutoff_ = 0.5 * ratio;
  half_width_ = zero_crossings / ratio;

  if (is_integral(from_hz) && is_integral(to_hz)) {
    const auto from = static_cast<long long>(from_hz);
    const auto to = static_cast<long long>(to_hz);
    const long long g = std::gcd(from, to);
    up_ = to / g;
    down_ = from / g;
    if (up_ <= 4096) {
      phase_taps_.resize(static_cast<std::size_t>(up_));
      phase_first_.resize(static_cast<std::size_t>(up_));
      for (long long p = 0; p < up_; ++p) {
        // Output m with (m * down) mod up == p sits at integer part + p / up.
        const double frac = static_cast<double>(p) / static_cast<double>(up_);
        const auto first = static_cast<long long>(std::ceil(frac - half_width_));
        const auto last = static_cast<long long>(std::floor(frac + half_width_));
        auto& taps = phase_taps_[static_cast<std::size_t>(p)];
        for (long long k = first; k <= last; ++k) taps.push_back(kernel(frac - static_cast<double>(k)));
        phase_first_[static_cast<std::size_t>(p)] = first;
      }
    }
  }
}

double Resampler::kernel(double offset) const {
  const double r = offset / half_width_;
  if (std::abs(r) >= 1.0) return 0.0;
  const double arg = 2.0 * cutoff_ * offset;
  const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
  const double window = bessel_i0(beta_ * std::sqrt(1.0 - r * r)) / i0_beta_;
  return 2.0 * cutoff_ * sinc * window;
}

std::vector<float> Resampler::process(std::span<const float> input) const {
  const auto n_in = static_cast<long long>(input.size());
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(input.size()) * to_hz_ / from_hz_));
  std::vector<float> out(n_out);

  for (std::size_t m = 0; m < n_out; ++m) {
    double acc = 0.0;
    double wsum = 0.0;
    if (!phase_taps_.empty()) {
      const long long pos = static_cast<long long>(m) * down_;
      const long long base = pos / up_;
      const auto phase = static_cast<std::size_t>(pos % up_);
      const auto& taps = phase_taps_[phase];
      const long long first = base + phase_first_[phase];
      for (std::size_t j = 0; j < taps.size(); ++j) {
        const long long k = first + static_cast<long long>(j);
        if (k < 0 || k >= n_in) continue;
        acc += taps[j] * input[static_cast<std::size_t>(k)];
        wsum += taps[j];
      }
    } else {
      const double x = static_cast<double>(m) * from_hz_ / to_hz_;
      const auto first = std::max(0LL, static_cast<long long>(std::ceil(x - half_width_)));
      const auto last = std::min(n_in - 1, static_cast<long long>(std::floor(x + half_width_)));
      for (long long k = first; k <= last; ++k) {
        const double w = kernel(x - static_cast<double>(k));
        acc += w * input[static_cast<std::size_t>(k)];
        wsum += w;
      }
    }
    out[m] = wsum != 0.0 ? static_cast<float>(acc / wsum) : 0.0f;
  }
  return out;
}

std::vector<float> resample(std::span<const float> audio, double from_hz, double to_hz) {
  return Resampler(from_hz, to_hz).process(audio);
}

}  // namespace earreact::dsp
