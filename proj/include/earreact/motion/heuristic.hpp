#pragma once

#include "earreact/core/config.hpp"
#include "earreact/motion/classifier.hpp"

namespace earreact::motion {

/// Periodicity descriptors of the per-unit gyro mean series (10 Hz).
struct PeriodicityFeatures {
  /// Largest autocorrelation over lags for band_low..band_high, normalized by
  /// the zero-lag energy summed over axes. 0 for a flat signal.
  double periodicity = 0.0;
  /// Share of non-DC spectral power inside the band.
  double band_fraction = 0.0;
  /// Frequency of the strongest non-DC spectral bin, Hz.
  double dominant_hz = 0.0;
};

PeriodicityFeatures periodicity_features(const MotionUnitSeq& seq,
                                         const HeuristicMotionConfig& config = {});

/// P(head_motion) = logistic(bias + w_p * periodicity + w_b * band_fraction).
class HeuristicMotionClassifier : public SequenceClassifier {
 public:
  explicit HeuristicMotionClassifier(HeuristicMotionConfig config = {});
  MotionProbabilities classify(const MotionUnitSeq& seq) const override;

 private:
  HeuristicMotionConfig config_;
};

}  // namespace earreact::motion
