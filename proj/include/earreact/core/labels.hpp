#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace earreact {

/// Closed set of reaction labels produced by the detectors.
enum class ReactionLabel : std::uint8_t {
  kNonReaction = 0,
  kSingingHumming = 1,
  kWhistling = 2,
  kHeadMotion = 3,
};

inline constexpr std::array<ReactionLabel, 4> kAllLabels = {
    ReactionLabel::kNonReaction, ReactionLabel::kSingingHumming,
    ReactionLabel::kWhistling, ReactionLabel::kHeadMotion};

/// Labels a vocal detector may emit, in HMM state order.
inline constexpr std::array<ReactionLabel, 3> kVocalLabels = {
    ReactionLabel::kNonReaction, ReactionLabel::kSingingHumming,
    ReactionLabel::kWhistling};

inline constexpr std::array<ReactionLabel, 2> kMotionLabels = {
    ReactionLabel::kNonReaction, ReactionLabel::kHeadMotion};

/// Stable wire names: "non_reaction", "singing_humming", "whistling", "head_motion".
std::string_view to_string(ReactionLabel label);

/// Inverse of to_string. Throws ParseError on unknown names.
ReactionLabel label_from_string(std::string_view name);

constexpr bool is_vocal_label(ReactionLabel l) {
  return l != ReactionLabel::kHeadMotion;
}
constexpr bool is_motion_label(ReactionLabel l) {
  return l == ReactionLabel::kNonReaction || l == ReactionLabel::kHeadMotion;
}
constexpr bool is_reaction(ReactionLabel l) {
  return l != ReactionLabel::kNonReaction;
}
constexpr std::size_t index_of(ReactionLabel l) {
  return static_cast<std::size_t>(l);
}

/// Intermediate label between classification and music-based correction.
///
/// `final` carries a decided ReactionLabel. `ambiguous` is a speech/music
/// classification that may be singing or background. `uncertain` is a
/// low-confidence classification whose top-k contained a vocal target; its
/// candidate is singing_humming or whistling.
class PipelineLabel {
 public:
  enum class Kind : std::uint8_t { kFinal, kAmbiguous, kUncertain };

  static PipelineLabel final_label(ReactionLabel label) {
    return PipelineLabel(Kind::kFinal, label);
  }
  static PipelineLabel ambiguous() {
    return PipelineLabel(Kind::kAmbiguous, ReactionLabel::kSingingHumming);
  }
  /// Throws ParameterError unless candidate is singing_humming or whistling.
  static PipelineLabel uncertain(ReactionLabel candidate);

  Kind kind() const { return kind_; }
  bool is_final() const { return kind_ == Kind::kFinal; }
  /// Final label, or the candidate for uncertain/ambiguous.
  ReactionLabel label() const { return label_; }

  std::string to_string() const;

  friend bool operator==(const PipelineLabel&, const PipelineLabel&) = default;

 private:
  PipelineLabel(Kind kind, ReactionLabel label) : kind_(kind), label_(label) {}

  Kind kind_;
  ReactionLabel label_;
};

}  // namespace earreact
