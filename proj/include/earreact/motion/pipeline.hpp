#pragma once

#include <vector>

#include "earreact/core/config.hpp"
#include "earreact/core/events.hpp"
#include "earreact/core/session.hpp"
#include "earreact/motion/classifier.hpp"
#include "earreact/vocal/pipeline.hpp"

namespace earreact::motion {

enum class PrefilterDecision { kPass, kFilteredNonReaction };

/// Closed interval [low_g, high_g] passes; fewer than two samples pass.
PrefilterDecision motion_prefilter(std::span<const std::array<double, 3>> accel,
                                   double low_g = 0.0092, double high_g = 0.114);

struct MotionResult {
  std::vector<ReactionLabel> labels;
  /// P(head_motion) for classified seconds, negative where no classifier ran.
  std::vector<double> head_probability;
  std::vector<ReactionEvent> events;
  FilteringStats stats;  // sound_filtered is always 0
  std::vector<std::string> diagnostics;
};

/// Per second: movement prefilter; otherwise classify the trailing 7 s of
/// 5 Hz low-passed gyro and label the current second. Seconds 0..5 that pass
/// the prefilter have no full window and are non_reaction.
class MotionPipeline {
 public:
  /// The classifier is borrowed and must outlive the pipeline.
  MotionPipeline(MotionConfig config, const SequenceClassifier& classifier);

  MotionResult run(const Session& session) const;

 private:
  MotionConfig config_;
  const SequenceClassifier& classifier_;
};

}  // namespace earreact::motion
