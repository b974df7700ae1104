#include "earreact/engage/features.hpp"

#include <algorithm>
#include <cmath>

#include "earreact/core/errors.hpp"

namespace earreact::engage {

namespace {

constexpr double kSpanTolerance = 1e-9;

void check_span(const ReactionEvent& e, double duration) {
  if (!std::isfinite(e.t_start) || !std::isfinite(e.t_end) || e.t_end <= e.t_start) {
    throw ParameterError("reaction event has an empty or invalid span");
  }
  if (e.t_start < -kSpanTolerance || e.t_end > duration + kSpanTolerance) {
    throw ParameterError("reaction event lies outside the session span");
  }
}

// Sorted, non-overlapping; returns the number of uncovered gaps.
std::size_t sort_and_count_gaps(std::vector<ReactionEvent>& events, double duration) {
  std::sort(events.begin(), events.end(),
            [](const ReactionEvent& a, const ReactionEvent& b) { return a.t_start < b.t_start; });
  std::size_t gaps = 0;
  double cursor = 0.0;
  for (const auto& e : events) {
    if (e.t_start < cursor - kSpanTolerance) {
      throw ParameterError("overlapping reaction events in one timeline");
    }
    if (e.t_start > cursor + kSpanTolerance) ++gaps;
    cursor = std::max(cursor, e.t_end);
  }
  if (cursor < duration - kSpanTolerance) ++gaps;
  return gaps;
}

double total(std::span<const ReactionEvent> events, ReactionLabel label) {
  double sum = 0.0;
  for (const auto& e : events) {
    if (e.label == label) sum += e.duration();
  }
  return sum;
}

std::size_t count(std::span<const ReactionEvent> events, ReactionLabel label) {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const auto& e) { return e.label == label; }));
}

}  // namespace

std::array<double, ReactionFeatures::kSize> ReactionFeatures::to_vector() const {
  return {vocal_non_reaction_duration, singing_duration,          whistling_duration,
          vocal_non_reaction_count,    singing_count,             whistling_count,
          motion_non_reaction_duration, head_motion_duration,     motion_non_reaction_count,
          head_motion_count};
}

ReactionFeatures reaction_features(std::span<const ReactionEvent> vocal_events,
                                   std::span<const ReactionEvent> motion_events,
                                   double session_duration_s) {
  if (!(session_duration_s > 0.0) || !std::isfinite(session_duration_s)) {
    throw ParameterError("session duration must be positive");
  }
  std::vector<ReactionEvent> vocal;
  std::vector<ReactionEvent> motion;
  for (auto list : {vocal_events, motion_events}) {
    for (const auto& e : list) {
      check_span(e, session_duration_s);
      if (e.label == ReactionLabel::kNonReaction) continue;
      ReactionEvent clipped = e;
      clipped.t_start = std::max(0.0, e.t_start);
      clipped.t_end = std::min(session_duration_s, e.t_end);
      (e.label == ReactionLabel::kHeadMotion ? motion : vocal).push_back(clipped);
    }
  }
  const std::size_t vocal_gaps = sort_and_count_gaps(vocal, session_duration_s);
  const std::size_t motion_gaps = sort_and_count_gaps(motion, session_duration_s);

  const double minutes = session_duration_s / 60.0;
  ReactionFeatures f;
  f.singing_duration = total(vocal, ReactionLabel::kSingingHumming) / session_duration_s;
  f.whistling_duration = total(vocal, ReactionLabel::kWhistling) / session_duration_s;
  f.vocal_non_reaction_duration = std::max(0.0, 1.0 - f.singing_duration - f.whistling_duration);
  f.singing_count = static_cast<double>(count(vocal, ReactionLabel::kSingingHumming)) / minutes;
  f.whistling_count = static_cast<double>(count(vocal, ReactionLabel::kWhistling)) / minutes;
  f.vocal_non_reaction_count = static_cast<double>(vocal_gaps) / minutes;

  f.head_motion_duration = total(motion, ReactionLabel::kHeadMotion) / session_duration_s;
  f.motion_non_reaction_duration = std::max(0.0, 1.0 - f.head_motion_duration);
  f.head_motion_count = static_cast<double>(count(motion, ReactionLabel::kHeadMotion)) / minutes;
  f.motion_non_reaction_count = static_cast<double>(motion_gaps) / minutes;
  return f;
}

std::vector<int> reaction_index_sequence(std::span<const ReactionLabel> vocal_labels,
                                         std::span<const ReactionLabel> motion_labels) {
  if (vocal_labels.size() != motion_labels.size()) {
    throw ParameterError("vocal and motion label sequences differ in length");
  }
  std::vector<int> out(vocal_labels.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (vocal_labels[i] == ReactionLabel::kSingingHumming) {
      out[i] = 1;
    } else if (vocal_labels[i] == ReactionLabel::kWhistling) {
      out[i] = 2;
    } else if (motion_labels[i] == ReactionLabel::kHeadMotion) {
      out[i] = 3;
    }
  }
  return out;
}

}  // namespace earreact::engage
