#include "earreact/core/events.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "earreact/core/text.hpp"
#include "json.hpp"

namespace earreact {

using nlohmann::json;

std::vector<ReactionEvent> merge_labels_to_events(std::span<const ReactionLabel> labels) {
  std::vector<ReactionEvent> events;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto t = static_cast<double>(i);
    if (!events.empty() && events.back().label == labels[i]) {
      events.back().t_end = t + 1.0;
    } else {
      events.push_back({labels[i], t, t + 1.0});
    }
  }
  return events;
}

std::vector<ReactionLabel> expand_events_to_labels(std::span<const ReactionEvent> events,
                                                   std::size_t seconds,
                                                   ReactionLabel fill) {
  std::vector<ReactionLabel> labels(seconds, fill);
  for (const auto& e : events) {
    const auto first = static_cast<long long>(std::ceil(e.t_start - 0.5));
    const auto last = static_cast<long long>(std::ceil(e.t_end - 0.5));  // exclusive
    for (long long k = std::max(0LL, first);
         k < std::min<long long>(last, static_cast<long long>(seconds)); ++k) {
      labels[static_cast<std::size_t>(k)] = e.label;
    }
  }
  return labels;
}

void write_events_jsonl(std::ostream& out, std::span<const EventRecord> events) {
  for (const auto& rec : events) {
    json j;
    j["label"] = std::string(to_string(rec.event.label));
    j["t_start"] = rec.event.t_start;
    j["t_end"] = rec.event.t_end;
    if (!rec.source.empty()) j["source"] = rec.source;
    out << j.dump() << '\n';
  }
}

std::vector<EventRecord> read_events_jsonl(std::istream& in) {
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      EventRecord rec;
      rec.event.label = label_from_string(j.at("label").get<std::string>());
      rec.event.t_start = j.at("t_start").get<double>();
      rec.event.t_end = j.at("t_end").get<double>();
      if (j.contains("source")) rec.source = j.at("source").get<std::string>();
      if (!(rec.event.t_end > rec.event.t_start)) {
        throw ParseError("event must have t_end > t_start");
      }
      events.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError("events line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("events line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

std::vector<EventRecord> read_events_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_events_jsonl(in);
}

std::vector<EventRecord> tag_events(std::span<const ReactionEvent> events,
                                    const std::string& source) {
  std::vector<EventRecord> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back({e, source});
  return out;
}

void write_label_spans_csv(std::ostream& out, std::span<const ReactionEvent> spans) {
  out << "t_start,t_end,label\n";
  for (const auto& s : spans) {
    out << format_number(s.t_start) << ',' << format_number(s.t_end) << ','
        << to_string(s.label) << '\n';
  }
}

std::vector<ReactionEvent> read_label_spans_csv(std::istream& in) {
  std::vector<ReactionEvent> spans;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "t_start,t_end,label") {
        throw ParseError("labels.csv line 1: expected header t_start,t_end,label");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(row, ',');
    if (fields.size() != 3) {
      throw ParseError("labels.csv line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      ReactionEvent e{label_from_string(fields[2]), parse_double(fields[0]),
                      parse_double(fields[1])};
      if (!(e.t_end > e.t_start)) throw ParseError("t_end must exceed t_start");
      spans.push_back(e);
    } catch (const ParseError& err) {
      throw ParseError("labels.csv line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  if (!header_seen) throw ParseError("labels.csv is empty");
  return spans;
}

std::vector<ReactionEvent> read_label_spans_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_label_spans_csv(in);
}

}  // namespace earreact
