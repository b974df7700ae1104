#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "earreact/core/config.hpp"
#include "earreact/core/labels.hpp"
#include "earreact/dsp/logmel.hpp"

namespace earreact::vocal {

/// Ranked class confidences of a sound-event classifier.
class ScoreVector {
 public:
  /// Throws ParameterError on length mismatch, scores outside [0, 1] or a
  /// sum that differs from 1 by more than 1e-6.
  ScoreVector(std::vector<std::string> class_names, std::vector<double> scores);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& class_names() const { return names_; }
  const std::vector<double>& scores() const { return scores_; }

  /// Class indices by descending score; ties keep the original order.
  const std::vector<std::size_t>& ranking() const { return ranking_; }
  const std::string& name_at_rank(std::size_t rank) const { return names_[ranking_[rank]]; }
  double score_at_rank(std::size_t rank) const { return scores_[ranking_[rank]]; }
  /// Top-1 minus top-2 confidence. Requires at least two classes.
  double least_margin() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> scores_;
  std::vector<std::size_t> ranking_;
};

/// Classifier class names that map onto detector labels (lower case).
struct ClassNameSets {
  std::vector<std::string> singing{"humming", "singing"};
  std::vector<std::string> whistling{"whistling", "whistle"};
  std::vector<std::string> ambiguous{"speech", "music"};

  static ClassNameSets from_config(const VocalConfig& config);
};

/// Top-1 mapping: singing names -> singing_humming, whistling names ->
/// whistling, speech/music -> ambiguous, anything else -> non_reaction.
/// Throws ParameterError on an empty score vector.
PipelineLabel map_labels(const ScoreVector& scores, const ClassNameSets& names = {});

/// Least-margin relaxation. A confident top-1 (margin >= threshold) is mapped
/// directly; otherwise the first vocal target class within the top k makes the
/// segment uncertain, and a top-k without targets is non_reaction.
/// Throws ParameterError when k < 1 or fewer than two classes are given.
PipelineLabel relax_rank(const ScoreVector& scores, double margin_threshold = 0.9, int k = 5,
                         const ClassNameSets& names = {});

/// Sound-event classifier over one-second segments. Implementations must be
/// deterministic and safe for concurrent const use.
class SoundEventClassifier {
 public:
  virtual ~SoundEventClassifier() = default;
  /// `patch` is absent when the session carries no raw audio.
  virtual ScoreVector classify(std::size_t segment_index,
                               const std::optional<dsp::LogMelPatch>& patch) const = 0;
};

/// Replays per-segment scores recorded offline (scores.jsonl).
class ScorePlaybackClassifier : public SoundEventClassifier {
 public:
  explicit ScorePlaybackClassifier(std::map<std::size_t, ScoreVector> scores);
  static ScorePlaybackClassifier load(const std::filesystem::path& path);

  /// Throws ParameterError when no record exists for the segment.
  ScoreVector classify(std::size_t segment_index,
                       const std::optional<dsp::LogMelPatch>& patch) const override;

 private:
  std::map<std::size_t, ScoreVector> scores_;
};

/// One line of scores.jsonl: {index, classes: [...], scores: [...]}.
struct ScoreRecord {
  std::size_t index = 0;
  std::vector<std::string> classes;
  std::vector<double> scores;
};

/// Parses scores.jsonl. Each record needs at least 5 classes. Records whose
/// scores sum below 1 (a truncated top-k list) get a residual "other" class
/// carrying the remaining mass. Throws ParseError.
std::map<std::size_t, ScoreVector> read_scores_jsonl(std::istream& in);
void write_scores_jsonl(std::ostream& out, const std::vector<ScoreRecord>& records);

}  // namespace earreact::vocal
