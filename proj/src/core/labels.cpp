#include "earreact/core/labels.hpp"

#include "earreact/core/errors.hpp"

namespace earreact {

std::string_view to_string(ReactionLabel label) {
  switch (label) {
    case ReactionLabel::kNonReaction:
      return "non_reaction";
    case ReactionLabel::kSingingHumming:
      return "singing_humming";
    case ReactionLabel::kWhistling:
      return "whistling";
    case ReactionLabel::kHeadMotion:
      return "head_motion";
  }
  return "non_reaction";
}

ReactionLabel label_from_string(std::string_view name) {
  for (ReactionLabel l : kAllLabels) {
    if (to_string(l) == name) return l;
  }
  throw ParseError("unknown reaction label '" + std::string(name) + "'");
}

PipelineLabel PipelineLabel::uncertain(ReactionLabel candidate) {
  if (candidate != ReactionLabel::kSingingHumming &&
      candidate != ReactionLabel::kWhistling) {
    throw ParameterError("uncertain candidate must be a vocal reaction, got " +
                         std::string(earreact::to_string(candidate)));
  }
  return PipelineLabel(Kind::kUncertain, candidate);
}

std::string PipelineLabel::to_string() const {
  switch (kind_) {
    case Kind::kFinal:
      return std::string(earreact::to_string(label_));
    case Kind::kAmbiguous:
      return "ambiguous";
    case Kind::kUncertain:
      return "uncertain(" + std::string(earreact::to_string(label_)) + ")";
  }
  return "?";
}

}  // namespace earreact
