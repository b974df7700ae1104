#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "earreact/core/labels.hpp"

namespace earreact {

/// A maximal run of one label on a timeline, in session seconds.
struct ReactionEvent {
  ReactionLabel label = ReactionLabel::kNonReaction;
  double t_start = 0.0;
  double t_end = 0.0;

  double duration() const { return t_end - t_start; }
  friend bool operator==(const ReactionEvent&, const ReactionEvent&) = default;
};

/// Run-length encodes a per-second label sequence into events.
std::vector<ReactionEvent> merge_labels_to_events(std::span<const ReactionLabel> labels);

/// Per-second labels of a timeline of `seconds` length. Second k takes the
/// label of the event covering its midpoint k + 0.5, or `fill` if none does.
std::vector<ReactionLabel> expand_events_to_labels(
    std::span<const ReactionEvent> events, std::size_t seconds,
    ReactionLabel fill = ReactionLabel::kNonReaction);

/// An event tagged with the detector that produced it ("vocal", "motion"),
/// or an empty source when the file does not say.
struct EventRecord {
  ReactionEvent event;
  std::string source;
};

/// JSON lines: {"label": ..., "t_start": ..., "t_end": ...[, "source": ...]}.
void write_events_jsonl(std::ostream& out, std::span<const EventRecord> events);
std::vector<EventRecord> read_events_jsonl(std::istream& in);
std::vector<EventRecord> read_events_jsonl(const std::filesystem::path& path);

std::vector<EventRecord> tag_events(std::span<const ReactionEvent> events,
                                    const std::string& source);

/// Ground-truth spans: CSV with header `t_start,t_end,label`.
void write_label_spans_csv(std::ostream& out, std::span<const ReactionEvent> spans);
std::vector<ReactionEvent> read_label_spans_csv(std::istream& in);
std::vector<ReactionEvent> read_label_spans_csv(const std::filesystem::path& path);

}  // namespace earreact
