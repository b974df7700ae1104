#pragma once

#include <optional>
#include <string>
#include <vector>

#include "earreact/core/config.hpp"
#include "earreact/core/events.hpp"
#include "earreact/core/session.hpp"
#include "earreact/dsp/signal.hpp"
#include "earreact/musicinfo/note_track.hpp"
#include "earreact/vocal/hmm.hpp"
#include "earreact/vocal/pitch_tracker.hpp"
#include "earreact/vocal/scores.hpp"

namespace earreact {

/// Per-stage segment counts. filtering_ratio = filtered / total.
struct FilteringStats {
  std::size_t total_segments = 0;
  std::size_t motion_filtered = 0;
  std::size_t sound_filtered = 0;
  std::size_t classified = 0;

  std::size_t filtered() const { return motion_filtered + sound_filtered; }
  double filtering_ratio() const {
    return total_segments == 0 ? 0.0
                               : static_cast<double>(filtered()) / static_cast<double>(total_segments);
  }
};

std::string stats_to_json(const FilteringStats& stats);
FilteringStats stats_from_json(const std::string& text);

}  // namespace earreact

namespace earreact::vocal {

enum class PrefilterDecision { kPass, kFilteredNonReaction };

/// Movement level outside [low_g, high_g] is certainly not a vocal reaction.
/// Fewer than two accelerometer samples pass.
PrefilterDecision vocal_motion_prefilter(const SensorSegment& segment, double low_g = 0.0104,
                                         double high_g = 0.12);

/// Audio quieter than threshold_db is certainly not a vocal reaction.
/// A segment without audio passes.
PrefilterDecision vocal_sound_prefilter(const SensorSegment& segment, double threshold_db = 49.0,
                                        double calibration_db = 94.0);

/// Where a segment's label was decided.
enum class VocalStage : std::uint8_t {
  kMotionFilter,
  kSoundFilter,
  kClassifier,
  kCorrection,
  kFailed,
};

struct VocalResult {
  /// Classification output before correction (final for filtered segments).
  std::vector<PipelineLabel> classified;
  /// Post-correction, pre-smoothing labels: the HMM observations.
  std::vector<ReactionLabel> raw_labels;
  /// Output labels (smoothed when smoothing is enabled).
  std::vector<ReactionLabel> labels;
  std::vector<VocalStage> stages;
  std::vector<ReactionEvent> events;
  FilteringStats stats;
  std::vector<std::string> diagnostics;
};

/// Filtering -> preprocessing + log-mel -> classification, label mapping and
/// rank relaxation -> music correction -> HMM smoothing -> events.
///
/// Dependencies are borrowed and must outlive the pipeline. `notes` may be
/// null only when correction is disabled; `hmm` only when smoothing is.
class VocalPipeline {
 public:
  VocalPipeline(VocalConfig config, const SoundEventClassifier& classifier,
                const PitchTracker& pitch_tracker, const musicinfo::MusicInfoStore* notes,
                const HmmParams* hmm);

  /// Throws ConfigError for a missing note track or HMM and AlignmentError for
  /// misaligned streams. Per-segment failures become non_reaction plus a
  /// diagnostic.
  VocalResult run(const Session& session) const;

 private:
  VocalConfig config_;
  ClassNameSets names_;
  const SoundEventClassifier& classifier_;
  const PitchTracker& pitch_tracker_;
  const musicinfo::MusicInfoStore* notes_;
  const HmmParams* hmm_;
  dsp::Resampler resampler_;
  dsp::FirstOrderLowPass lowpass_;
};

}  // namespace earreact::vocal
