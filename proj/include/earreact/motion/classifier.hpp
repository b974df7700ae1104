#pragma once

#include "earreact/motion/features.hpp"

namespace earreact::motion {

struct MotionProbabilities {
  double head_motion = 0.5;
  double non_reaction = 0.5;
};

/// Binary head-motion classifier over a 7 s motion-unit sequence. Outputs sum
/// to 1; implementations must be safe for concurrent const use.
class SequenceClassifier {
 public:
  virtual ~SequenceClassifier() = default;
  virtual MotionProbabilities classify(const MotionUnitSeq& seq) const = 0;
};

}  // namespace earreact::motion
