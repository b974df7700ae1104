#include "earreact/dsp/logmel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "earreact/core/errors.hpp"

namespace earreact::dsp {

namespace {

constexpr std::size_t kBins = kFftLength / 2 + 1;

// FFTW planning is not thread-safe; executing an existing plan on new
// buffers is.
class RealFft {
 public:
  static const RealFft& instance() {
    static RealFft fft;
    return fft;
  }

  void forward(std::vector<double>& in, std::vector<std::complex<double>>& out) const {
    fftw_execute_dft_r2c(plan_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  }

 private:
  RealFft() {
    static std::mutex planner_mutex;
    std::lock_guard lock(planner_mutex);
    std::vector<double> in(kFftLength);
    std::vector<std::complex<double>> out(kBins);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(kFftLength), in.data(),
                                 reinterpret_cast<fftw_complex*>(out.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~RealFft() { fftw_destroy_plan(plan_); }

  fftw_plan plan_;
};

const std::array<double, kStftWindow>& hann_window() {
  static const auto window = [] {
    std::array<double, kStftWindow> w{};
    for (std::size_t n = 0; n < kStftWindow; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / kStftWindow);
    }
    return w;
  }();
  return window;
}

// Nonzero bin range [first, last) of each mel band.
struct BandSupport {
  std::array<std::size_t, kMelBands> first{};
  std::array<std::size_t, kMelBands> last{};
};

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

const std::vector<std::array<double, kMelBands>>& mel_weight_matrix() {
  static const auto weights = [] {
    std::vector<std::array<double, kMelBands>> w(kBins);
    const double low = hz_to_mel(kMelLowHz);
    const double high = hz_to_mel(kMelHighHz);
    std::array<double, kMelBands + 2> edges{};
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = low + (high - low) * static_cast<double>(i) / static_cast<double>(kMelBands + 1);
    }
    const double nyquist = kLogMelSampleRate / 2.0;
    for (std::size_t b = 1; b < kBins; ++b) {
      const double mel = hz_to_mel(nyquist * static_cast<double>(b) / static_cast<double>(kBins - 1));
      for (std::size_t m = 0; m < kMelBands; ++m) {
        const double lower = (mel - edges[m]) / (edges[m + 1] - edges[m]);
        const double upper = (edges[m + 2] - mel) / (edges[m + 2] - edges[m + 1]);
        w[b][m] = std::max(0.0, std::min(lower, upper));
      }
    }
    return w;
  }();
  return weights;
}

namespace {

const BandSupport& band_support() {
  static const auto support = [] {
    const auto& w = mel_weight_matrix();
    BandSupport s;
    for (std::size_t m = 0; m < kMelBands; ++m) {
      s.first[m] = kBins;
      for (std::size_t b = 1; b < kBins; ++b) {
        if (w[b][m] > 0.0) {
          s.first[m] = std::min(s.first[m], b);
          s.last[m] = b + 1;
        }
      }
      if (s.first[m] > s.last[m]) s.first[m] = s.last[m];
    }
    return s;
  }();
  return support;
}

}  // namespace

LogMelPatch log_mel_patch(std::span<const float> audio) {
  if (audio.size() != kLogMelInputSamples) {
    throw ParameterError("log-mel patch needs exactly 16000 samples, got " +
                         std::to_string(audio.size()));
  }
  const auto& window = hann_window();
  const auto& weights = mel_weight_matrix();
  const auto& support = band_support();
  const auto& fft = RealFft::instance();

  std::vector<double> frame(kFftLength, 0.0);
  std::vector<std::complex<double>> spectrum(kBins);
  std::array<double, kBins> magnitude{};
  LogMelPatch patch;
  for (std::size_t f = 0; f < kPatchFrames; ++f) {
    const std::size_t start = f * kStftHop;
    for (std::size_t n = 0; n < kStftWindow; ++n) frame[n] = window[n] * audio[start + n];
    std::fill(frame.begin() + kStftWindow, frame.end(), 0.0);
    fft.forward(frame, spectrum);
    for (std::size_t b = 0; b < kBins; ++b) {
      const double re = spectrum[b].real();
      const double im = spectrum[b].imag();
      magnitude[b] = std::sqrt(re * re + im * im);
    }
    for (std::size_t m = 0; m < kMelBands; ++m) {
      double energy = 0.0;
      for (std::size_t b = support.first[m]; b < support.last[m]; ++b) {
        energy += magnitude[b] * weights[b][m];
      }
      patch.at(f, m) = std::log(energy + kLogOffset);
    }
  }
  return patch;
}

}  // namespace earreact::dsp
