#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "earreact/core/errors.hpp"
#include "earreact/dsp/chroma.hpp"
#include "earreact/dsp/dtw.hpp"
#include "earreact/dsp/logmel.hpp"
#include "earreact/dsp/signal.hpp"

using namespace earreact;
using namespace earreact::dsp;

namespace {

constexpr double kPi = std::numbers::pi;

ChromaSeq seq(std::initializer_list<int> v) {
  ChromaSeq out;
  for (int x : v) out.push_back(x < 0 ? Chroma::unvoiced() : Chroma::pitch_class(x));
  return out;
}

// Cost of every monotone path from (i, j) to the end, minimized by enumeration.
double enumerate_paths(const ChromaSeq& a, const ChromaSeq& b, std::size_t i, std::size_t j) {
  auto local = [&](std::size_t x, std::size_t y) {
    const Chroma p = a[x];
    const Chroma q = b[y];
    if (!p.voiced() && !q.voiced()) return 0.0;
    if (!p.voiced() || !q.voiced()) return 6.0;
    const int d = std::abs(p.value() - q.value()) % 12;
    return static_cast<double>(d > 6 ? 12 - d : d);
  };
  const double here = local(i, j);
  if (i + 1 == a.size() && j + 1 == b.size()) return here;
  double best = 1e300;
  if (i + 1 < a.size()) best = std::min(best, enumerate_paths(a, b, i + 1, j));
  if (j + 1 < b.size()) best = std::min(best, enumerate_paths(a, b, i, j + 1));
  if (i + 1 < a.size() && j + 1 < b.size()) best = std::min(best, enumerate_paths(a, b, i + 1, j + 1));
  return here + best;
}

ChromaSeq random_seq(std::mt19937_64& rng, std::size_t max_len) {
  ChromaSeq s(1 + rng() % max_len);
  for (auto& c : s) {
    const int v = static_cast<int>(rng() % 13);
    c = v == 12 ? Chroma::unvoiced() : Chroma::pitch_class(v);
  }
  return s;
}

std::vector<double> sine(double freq, double rate, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2 * kPi * freq * static_cast<double>(i) / rate);
  return x;
}

// Amplitude of the `freq` component over x[from..], by projection on sin/cos.
double tone_amplitude(std::span<const double> x, double freq, double rate, std::size_t from) {
  double s = 0, c = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    const double ph = 2 * kPi * freq * static_cast<double>(i) / rate;
    s += x[i] * std::sin(ph);
    c += x[i] * std::cos(ph);
  }
  const double n = static_cast<double>(x.size() - from);
  return 2.0 * std::hypot(s, c) / n;
}

}  // namespace

TEST_CASE("movement_level examples") {
  std::vector<std::array<double, 3>> still(20, {0, 0, 1});
  CHECK(movement_level(still) == doctest::Approx(0.0).epsilon(1e-12));
  std::vector<std::array<double, 3>> alt;
  for (int i = 0; i < 10; ++i) alt.push_back({0, 0, i % 2 ? 1.2 : 1.0});
  CHECK(movement_level(alt) == doctest::Approx(0.1).epsilon(1e-12));
  std::vector<std::array<double, 3>> tilted(10, {0.6, 0, 0.8});
  CHECK(movement_level(tilted) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  std::vector<std::array<double, 3>> one(1, {0, 0, 1});
  CHECK_THROWS_AS(movement_level(one), InsufficientDataError);
}

TEST_CASE("movement_level is rotation invariant") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::array<double, 3>> a(70);
    for (auto& v : a) v = {g(rng), g(rng), 1.0 + g(rng)};
    const double th = g(rng) * 3, ph = g(rng) * 3;
    // Rotation about z by th then about x by ph.
    std::vector<std::array<double, 3>> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = std::cos(th) * a[i][0] - std::sin(th) * a[i][1];
      const double y = std::sin(th) * a[i][0] + std::cos(th) * a[i][1];
      const double z = a[i][2];
      r[i] = {x, std::cos(ph) * y - std::sin(ph) * z, std::sin(ph) * y + std::cos(ph) * z};
    }
    CHECK(movement_level(r) == doctest::Approx(movement_level(a)).epsilon(1e-9));
  }
}

TEST_CASE("sound_level_db examples") {
  std::vector<float> square(1000);
  for (std::size_t i = 0; i < square.size(); ++i) square[i] = i % 2 ? 1.0f : -1.0f;
  CHECK(sound_level_db(square) == doctest::Approx(94.0).epsilon(1e-9));
  std::vector<float> zero(1000, 0.0f);
  CHECK(sound_level_db(zero) <= -140.0);
  std::vector<float> s(44100);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<float>(std::sin(2 * kPi * 441.0 * static_cast<double>(i) / 44100.0));
  CHECK(sound_level_db(s) == doctest::Approx(94.0 + 20.0 * std::log10(1.0 / std::sqrt(2.0))).epsilon(1e-5));
  CHECK(sound_level_db(s) == doctest::Approx(90.99).epsilon(1e-4));
  CHECK_THROWS_AS(sound_level_db(std::span<const float>{}), ParameterError);
}

TEST_CASE("lowpass DC and cutoff gain") {
  const std::vector<double> c(2000, 0.37);
  const auto y = lowpass_first_order(c, 16000.0, 2000.0);
  REQUIRE(y.size() == c.size());
  for (std::size_t i = 50; i < y.size(); ++i) CHECK(std::abs(y[i] - 0.37) < 1e-6);

  const double rate = 44100.0, fc = 2000.0;
  const auto at_cut = lowpass_first_order(sine(fc, rate, 44100), rate, fc);
  CHECK(tone_amplitude(at_cut, fc, rate, 4410) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.005));
  const auto high = lowpass_first_order(sine(10 * fc, rate, 44100), rate, fc);
  CHECK(tone_amplitude(high, 10 * fc, rate, 4410) < 0.15);

  const auto motion = lowpass_first_order(sine(5.0, 70.0, 7000), 70.0, 5.0);
  CHECK(tone_amplitude(motion, 5.0, 70.0, 700) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.005));

  CHECK_THROWS_AS(lowpass_first_order(c, 16000.0, 8000.0), ParameterError);
  CHECK_THROWS_AS(lowpass_first_order(c, 16000.0, 0.0), ParameterError);
}

TEST_CASE("lowpass matches the analytic bilinear response") {
  // H(e^jw) = b0 (1 + e^-jw) / (1 + a1 e^-jw); check |H| at several frequencies.
  const FirstOrderLowPass f(1000.0, 100.0);
  for (double freq : {10.0, 50.0, 100.0, 200.0, 400.0}) {
    const double w = 2 * kPi * freq / 1000.0;
    const std::complex<double> z = std::polar(1.0, -w);
    const double expect = std::abs(f.b0() * (1.0 + z) / (1.0 + f.a1() * z));
    const auto y = f.apply(sine(freq, 1000.0, 20000));
    CHECK(tone_amplitude(y, freq, 1000.0, 2000) == doctest::Approx(expect).epsilon(2e-3));
  }
}

TEST_CASE("resample lengths, DC and tones") {
  const std::vector<float> one_sec(44100, 0.5f);
  const auto out = resample(one_sec);
  REQUIRE(out.size() == 16000);
  for (float v : out) CHECK(std::abs(v - 0.5f) < 1e-3);
  CHECK(resample(std::vector<float>(1000, 0.0f)).size() == 363);  // round(1000*16000/44100)

  const auto x = sine(1000.0, 44100.0, 44100);
  std::vector<float> xf(x.begin(), x.end());
  const auto y = resample(xf);
  std::vector<double> yd(y.begin(), y.end());
  CHECK(tone_amplitude(yd, 1000.0, 16000.0, 0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(resample(xf, 0.0, 16000.0), ParameterError);
}

TEST_CASE("log-mel patch shape and silence") {
  const std::vector<float> zero(16000, 0.0f);
  const auto p = log_mel_patch(zero);
  CHECK(LogMelPatch::frames() == 96);
  CHECK(LogMelPatch::bands() == 64);
  CHECK(p.values().size() == 96 * 64);
  for (double v : p.values()) CHECK(v == std::log(0.001));
  CHECK_THROWS_AS(log_mel_patch(std::vector<float>(15999)), ParameterError);
}

TEST_CASE("log-mel tone lands in the band centered nearest it") {
  // Band centers: 66 points uniform in HTK mel over 125..7500 Hz, interior 64.
  auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double lo = mel(125.0), hi = mel(7500.0);
  std::size_t nearest = 0;
  double best = 1e9;
  for (std::size_t k = 0; k < 64; ++k) {
    const double c = hz(lo + (hi - lo) * static_cast<double>(k + 1) / 65.0);
    if (std::abs(c - 1000.0) < best) {
      best = std::abs(c - 1000.0);
      nearest = k;
    }
  }
  const auto x = sine(1000.0, 16000.0, 16000, 0.5);
  const std::vector<float> xf(x.begin(), x.end());
  const auto p = log_mel_patch(xf);
  for (std::size_t f = 0; f < 96; ++f) {
    std::size_t arg = 0;
    for (std::size_t b = 1; b < 64; ++b) if (p.at(f, b) > p.at(f, arg)) arg = b;
    CHECK(arg == nearest);
  }
  CHECK(log_mel_patch(xf) == p);
}

TEST_CASE("hz_to_chroma examples") {
  CHECK(hz_to_chroma(440.0, 0.9) == Chroma::pitch_class(9));
  CHECK(hz_to_chroma(880.0, 0.9) == Chroma::pitch_class(9));
  CHECK(hz_to_chroma(261.63, 0.9) == Chroma::pitch_class(0));
  CHECK_FALSE(hz_to_chroma(500.0, 0.2).voiced());
  CHECK_THROWS_AS(hz_to_chroma(0.0, 0.9), ParameterError);
  CHECK_NOTHROW(hz_to_chroma(0.0, 0.1));
  CHECK_THROWS_AS(Chroma::pitch_class(12), ParameterError);
  CHECK(Chroma::unvoiced().to_string() == "U");
}

TEST_CASE("hz_to_chroma is octave invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(std::log(80.0), std::log(2000.0));
  for (int i = 0; i < 1000; ++i) {
    const double f = std::exp(u(rng));
    CHECK(hz_to_chroma(f, 1.0) == hz_to_chroma(2.0 * f, 1.0));
  }
}

TEST_CASE("dtw examples") {
  const auto a = seq({0, 3, 3, 7, -1, 11});
  CHECK(dtw_distance(a, a) == 0.0);
  CHECK(dtw_distance(seq({0}), seq({11})) == 1.0);
  // Path (0,0)(1,0)(2,1)(2,2) matches every pair exactly.
  CHECK(dtw_distance(seq({0, 0, 11}), seq({0, 11, 11})) == 0.0);
  CHECK(dtw_distance(seq({-1}), seq({4})) == 6.0);
  CHECK(dtw_distance(seq({-1, -1}), seq({-1})) == 0.0);
  CHECK_THROWS_AS(dtw_distance(ChromaSeq{}, a), ParameterError);
}

TEST_CASE("dtw agrees with path enumeration and is symmetric") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_seq(rng, 7);
    const auto b = random_seq(rng, 7);
    const double d = dtw_distance(a, b);
    CHECK(d == enumerate_paths(a, b, 0, 0));
    CHECK(d == dtw_distance(b, a));
    CHECK(dtw_distance(a, a) == 0.0);
    CHECK(d >= 0.0);
  }
}
