#include "earreact/motion/features.hpp"

#include <algorithm>
#include <cmath>

#include "earreact/core/errors.hpp"

namespace earreact::motion {

MotionUnitSeq extract_motion_units(const std::array<std::span<const double>, 3>& gyro) {
  for (const auto& axis : gyro) {
    if (axis.size() != kWindowSamples) {
      throw ParameterError("motion units need 490 gyro samples per axis, got " +
                           std::to_string(axis.size()));
    }
  }
  MotionUnitSeq seq;
  for (std::size_t u = 0; u < kUnits; ++u) {
    for (std::size_t a = 0; a < 3; ++a) {
      const auto slice = gyro[a].subspan(u * kSamplesPerUnit, kSamplesPerUnit);
      const auto [lo, hi] = std::minmax_element(slice.begin(), slice.end());
      double sum = 0.0;
      double sq = 0.0;
      for (double v : slice) {
        sum += v;
        sq += v * v;
      }
      const double n = kSamplesPerUnit;
      const double mean = sum / n;
      double var = 0.0;
      for (double v : slice) var += (v - mean) * (v - mean);
      seq.at(u, feature_index(a, UnitStat::kMax)) = *hi;
      seq.at(u, feature_index(a, UnitStat::kMin)) = *lo;
      seq.at(u, feature_index(a, UnitStat::kMean)) = mean;
      seq.at(u, feature_index(a, UnitStat::kRange)) = *hi - *lo;
      seq.at(u, feature_index(a, UnitStat::kStd)) = std::sqrt(var / n);
      seq.at(u, feature_index(a, UnitStat::kRms)) = std::sqrt(sq / n);
    }
  }
  return seq;
}

}  // namespace earreact::motion
