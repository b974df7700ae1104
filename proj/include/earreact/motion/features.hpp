#pragma once

#include <array>
#include <span>
#include <vector>

namespace earreact::motion {

inline constexpr std::size_t kUnits = 70;
inline constexpr std::size_t kSamplesPerUnit = 7;  // 100 ms at 70 Hz
inline constexpr std::size_t kWindowSamples = kUnits * kSamplesPerUnit;
inline constexpr std::size_t kStatsPerAxis = 6;
inline constexpr std::size_t kFeatures = 3 * kStatsPerAxis;

/// Per-axis statistic order inside a motion unit.
enum class UnitStat : std::size_t { kMax = 0, kMin, kMean, kRange, kStd, kRms };

constexpr std::size_t feature_index(std::size_t axis, UnitStat stat) {
  return axis * kStatsPerAxis + static_cast<std::size_t>(stat);
}

/// 70 motion units x 18 gyro features (axis-major: x max, min, mean, range,
/// std, rms, then y, then z).
class MotionUnitSeq {
 public:
  MotionUnitSeq() : values_(kUnits * kFeatures, 0.0) {}

  double at(std::size_t unit, std::size_t feature) const { return values_[unit * kFeatures + feature]; }
  double& at(std::size_t unit, std::size_t feature) { return values_[unit * kFeatures + feature]; }
  std::span<const double> unit(std::size_t u) const {
    return std::span<const double>(values_).subspan(u * kFeatures, kFeatures);
  }

  static constexpr std::size_t units() { return kUnits; }
  static constexpr std::size_t features() { return kFeatures; }

 private:
  std::vector<double> values_;
};

/// Statistics of 100 ms gyro slices (population std). Each axis must hold
/// exactly 490 samples; throws ParameterError otherwise.
MotionUnitSeq extract_motion_units(const std::array<std::span<const double>, 3>& gyro_7s);

}  // namespace earreact::motion
