#pragma once

#include <array>
#include <span>
#include <vector>

#include "earreact/core/events.hpp"

namespace earreact::engage {

/// Per-session reaction summary used by the rating and familiarity trees.
/// Durations are fractions of the session; counts are events per minute.
/// The vocal timeline holds non_reaction, singing_humming and whistling, the
/// motion timeline non_reaction and head_motion. non_reaction is the part of
/// a timeline no reaction event covers, counted as maximal uncovered gaps.
struct ReactionFeatures {
  double vocal_non_reaction_duration = 1.0;
  double singing_duration = 0.0;
  double whistling_duration = 0.0;
  double vocal_non_reaction_count = 0.0;
  double singing_count = 0.0;
  double whistling_count = 0.0;
  double motion_non_reaction_duration = 1.0;
  double head_motion_duration = 0.0;
  double motion_non_reaction_count = 0.0;
  double head_motion_count = 0.0;

  static constexpr std::size_t kSize = 10;
  /// Field order above.
  std::array<double, kSize> to_vector() const;
};

/// Events labeled non_reaction are ignored; head_motion events belong to the
/// motion timeline and the others to the vocal one regardless of which list
/// they came in. Throws ParameterError for a non-positive duration, an event
/// outside [0, session_duration_s], an empty event or overlapping events
/// within a timeline.
ReactionFeatures reaction_features(std::span<const ReactionEvent> vocal_events,
                                   std::span<const ReactionEvent> motion_events,
                                   double session_duration_s);

/// Per-second reaction index: singing 1, whistling 2, else head motion 3,
/// else 0. Vocal reactions take precedence. Throws ParameterError on a length
/// mismatch.
std::vector<int> reaction_index_sequence(std::span<const ReactionLabel> vocal_labels,
                                         std::span<const ReactionLabel> motion_labels);

}  // namespace earreact::engage
