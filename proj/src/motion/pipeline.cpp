#include "earreact/motion/pipeline.hpp"

#include <cmath>

#include "earreact/core/errors.hpp"
#include "earreact/dsp/signal.hpp"
#include "earreact/motion/features.hpp"

namespace earreact::motion {

PrefilterDecision motion_prefilter(std::span<const std::array<double, 3>> accel, double low_g,
                                   double high_g) {
  if (accel.size() < 2) return PrefilterDecision::kPass;
  const double level = dsp::movement_level(accel);
  return (level < low_g || level > high_g) ? PrefilterDecision::kFilteredNonReaction
                                           : PrefilterDecision::kPass;
}

MotionPipeline::MotionPipeline(MotionConfig config, const SequenceClassifier& classifier)
    : config_(std::move(config)), classifier_(classifier) {}

MotionResult MotionPipeline::run(const Session& session) const {
  const auto segments = segment_session(session);
  const auto per_second = static_cast<std::size_t>(std::llround(config_.sample_rate_hz));
  const std::size_t window_seconds = kWindowSamples / per_second;

  // Causal filter over the whole stream, as a streaming implementation would run it.
  auto gyro = uniform_gyro(session, config_.sample_rate_hz, segments.size() * per_second);
  const dsp::FirstOrderLowPass lpf(config_.sample_rate_hz, config_.lpf_cutoff_hz);
  for (auto& axis : gyro) axis = lpf.apply(std::span<const double>(axis));

  MotionResult result;
  result.stats.total_segments = segments.size();
  for (const auto& seg : segments) {
    ReactionLabel label = ReactionLabel::kNonReaction;
    double prob = -1.0;
    try {
      const auto accel = accel_of(seg.imu);
      if (config_.prefilter &&
          motion_prefilter(accel, config_.low_g, config_.high_g) ==
              PrefilterDecision::kFilteredNonReaction) {
        ++result.stats.motion_filtered;
      } else if (seg.index + 1 >= window_seconds) {
        const std::size_t begin = (seg.index + 1 - window_seconds) * per_second;
        const std::array<std::span<const double>, 3> window = {
            std::span<const double>(gyro[0]).subspan(begin, kWindowSamples),
            std::span<const double>(gyro[1]).subspan(begin, kWindowSamples),
            std::span<const double>(gyro[2]).subspan(begin, kWindowSamples)};
        ++result.stats.classified;
        prob = classifier_.classify(extract_motion_units(window)).head_motion;
        if (prob > config_.decision_threshold) label = ReactionLabel::kHeadMotion;
      }
    } catch (const Error& e) {
      label = ReactionLabel::kNonReaction;
      result.diagnostics.push_back("second " + std::to_string(seg.index) +
                                   " failed closed: " + e.what());
    }
    result.labels.push_back(label);
    result.head_probability.push_back(prob);
  }
  result.events = merge_labels_to_events(result.labels);
  return result;
}

}  // namespace earreact::motion
