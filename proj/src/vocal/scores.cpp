#include "earreact/vocal/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "earreact/core/errors.hpp"
#include "earreact/core/text.hpp"
#include "json.hpp"

namespace earreact::vocal {

using nlohmann::json;

ScoreVector::ScoreVector(std::vector<std::string> class_names, std::vector<double> scores)
    : names_(std::move(class_names)), scores_(std::move(scores)) {
  if (names_.size() != scores_.size()) {
    throw ParameterError("score vector has " + std::to_string(names_.size()) + " classes but " +
                         std::to_string(scores_.size()) + " scores");
  }
  double sum = 0.0;
  for (double s : scores_) {
    if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("score outside [0, 1]");
    sum += s;
  }
  if (!names_.empty() && std::abs(sum - 1.0) > 1e-6) {
    throw ParameterError("scores sum to " + format_number(sum) + ", expected 1");
  }
  ranking_.resize(names_.size());
  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(),
                   [this](std::size_t a, std::size_t b) { return scores_[a] > scores_[b]; });
}

double ScoreVector::least_margin() const {
  if (size() < 2) throw ParameterError("least margin needs at least two classes");
  return score_at_rank(0) - score_at_rank(1);
}

ClassNameSets ClassNameSets::from_config(const VocalConfig& config) {
  auto lower = [](const std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(to_lower(s));
    return out;
  };
  return {lower(config.singing_classes), lower(config.whistling_classes),
          lower(config.ambiguous_classes)};
}

namespace {

bool contains(const std::vector<std::string>& set, const std::string& lowered) {
  return std::find(set.begin(), set.end(), lowered) != set.end();
}

}  // namespace

PipelineLabel map_labels(const ScoreVector& scores, const ClassNameSets& names) {
  if (scores.empty()) throw ParameterError("cannot map an empty score vector");
  const std::string top = to_lower(scores.name_at_rank(0));
  if (contains(names.singing, top)) return PipelineLabel::final_label(ReactionLabel::kSingingHumming);
  if (contains(names.whistling, top)) return PipelineLabel::final_label(ReactionLabel::kWhistling);
  if (contains(names.ambiguous, top)) return PipelineLabel::ambiguous();
  return PipelineLabel::final_label(ReactionLabel::kNonReaction);
}

PipelineLabel relax_rank(const ScoreVector& scores, double margin_threshold, int k,
                         const ClassNameSets& names) {
  if (k < 1) throw ParameterError("relax_rank needs k >= 1");
  if (scores.least_margin() >= margin_threshold) return map_labels(scores, names);

  const std::size_t depth = std::min(scores.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < depth; ++r) {
    const std::string name = to_lower(scores.name_at_rank(r));
    if (contains(names.whistling, name)) return PipelineLabel::uncertain(ReactionLabel::kWhistling);
    if (contains(names.singing, name) || contains(names.ambiguous, name)) {
      return PipelineLabel::uncertain(ReactionLabel::kSingingHumming);
    }
  }
  return PipelineLabel::final_label(ReactionLabel::kNonReaction);
}

ScorePlaybackClassifier::ScorePlaybackClassifier(std::map<std::size_t, ScoreVector> scores)
    : scores_(std::move(scores)) {}

ScorePlaybackClassifier ScorePlaybackClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return ScorePlaybackClassifier(read_scores_jsonl(in));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ScoreVector ScorePlaybackClassifier::classify(std::size_t segment_index,
                                              const std::optional<dsp::LogMelPatch>&) const {
  const auto it = scores_.find(segment_index);
  if (it == scores_.end()) {
    throw ParameterError("no recorded scores for segment " + std::to_string(segment_index));
  }
  return it->second;
}

std::map<std::size_t, ScoreVector> read_scores_jsonl(std::istream& in) {
  std::map<std::size_t, ScoreVector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "scores line " + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      const auto index = j.at("index").get<std::size_t>();
      auto classes = j.at("classes").get<std::vector<std::string>>();
      auto scores = j.at("scores").get<std::vector<double>>();
      if (classes.size() < 5) throw ParseError("at least 5 classes required");
      if (classes.size() != scores.size()) throw ParseError("classes/scores length mismatch");
      const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
      if (sum > 1.0 + 1e-6) throw ParseError("scores sum above 1");
      if (sum < 1.0 - 1e-6) {
        classes.emplace_back("other");
        scores.push_back(1.0 - sum);
      }
      out.insert_or_assign(index, ScoreVector(std::move(classes), std::move(scores)));
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const Error& e) {
      throw ParseError(where + e.what());
    }
  }
  return out;
}

void write_scores_jsonl(std::ostream& out, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) {
    json j;
    j["index"] = r.index;
    j["classes"] = r.classes;
    j["scores"] = r.scores;
    out << j.dump() << '\n';
  }
}

}  // namespace earreact::vocal
