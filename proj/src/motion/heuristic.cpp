#include "earreact/motion/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace earreact::motion {

namespace {

constexpr double kUnitRateHz = 10.0;
constexpr double kFlatEnergy = 1e-12;

}  // namespace

PeriodicityFeatures periodicity_features(const MotionUnitSeq& seq,
                                         const HeuristicMotionConfig& config) {
  // The unit mean tracks the low-passed gyro at 10 Hz; unit std would alias
  // nodding above 2.5 Hz.
  std::array<std::array<double, kUnits>, 3> x{};
  double energy = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    double mean = 0.0;
    for (std::size_t u = 0; u < kUnits; ++u) mean += seq.at(u, feature_index(a, UnitStat::kMean));
    mean /= static_cast<double>(kUnits);
    for (std::size_t u = 0; u < kUnits; ++u) {
      x[a][u] = seq.at(u, feature_index(a, UnitStat::kMean)) - mean;
      energy += x[a][u] * x[a][u];
    }
  }

  PeriodicityFeatures f;
  if (energy < kFlatEnergy) return f;

  const auto min_lag = static_cast<std::size_t>(std::ceil(kUnitRateHz / config.band_high_hz));
  const auto max_lag = std::min<std::size_t>(
      kUnits - 1, static_cast<std::size_t>(std::floor(kUnitRateHz / config.band_low_hz)));
  for (std::size_t lag = std::max<std::size_t>(1, min_lag); lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t u = 0; u + lag < kUnits; ++u) acc += x[a][u] * x[a][u + lag];
    }
    f.periodicity = std::max(f.periodicity, acc / energy);
  }

  double total = 0.0;
  double in_band = 0.0;
  double best_power = -1.0;
  for (std::size_t k = 1; k <= kUnits / 2; ++k) {
    double power = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      double re = 0.0, im = 0.0;
      for (std::size_t u = 0; u < kUnits; ++u) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * u) / kUnits;
        re += x[a][u] * std::cos(phase);
        im -= x[a][u] * std::sin(phase);
      }
      power += re * re + im * im;
    }
    const double hz = static_cast<double>(k) * kUnitRateHz / kUnits;
    total += power;
    if (hz >= config.band_low_hz && hz <= config.band_high_hz) in_band += power;
    if (power > best_power) {
      best_power = power;
      f.dominant_hz = hz;
    }
  }
  f.band_fraction = total > 0.0 ? in_band / total : 0.0;
  return f;
}

HeuristicMotionClassifier::HeuristicMotionClassifier(HeuristicMotionConfig config)
    : config_(config) {}

MotionProbabilities HeuristicMotionClassifier::classify(const MotionUnitSeq& seq) const {
  const auto f = periodicity_features(seq, config_);
  const double z = config_.bias + config_.periodicity_weight * f.periodicity +
                   config_.band_weight * f.band_fraction;
  const double p = 1.0 / (1.0 + std::exp(-z));
  return {p, 1.0 - p};
}

}  // namespace earreact::motion
