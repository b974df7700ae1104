#pragma once

#include <optional>
#include <span>
#include <string>

#include "earreact/core/labels.hpp"
#include "earreact/dsp/chroma.hpp"
#include "earreact/musicinfo/note_track.hpp"
#include "earreact/vocal/pitch_tracker.hpp"

namespace earreact::vocal {

/// Resolves an ambiguous/uncertain label from its melody distance: above the
/// threshold it is non_reaction, otherwise ambiguous becomes singing_humming
/// and uncertain becomes its candidate. Throws ParameterError for a final label.
ReactionLabel decide_correction(const PipelineLabel& label, double dtw_distance,
                                double dtw_threshold);

dsp::ChromaSeq chroma_from_pitch(std::span<const PitchEstimate> estimates,
                                 double conf_threshold = 0.5);

struct CorrectionOutcome {
  ReactionLabel label = ReactionLabel::kNonReaction;
  std::optional<double> distance;
  /// Set when the segment was failed closed to non_reaction.
  std::string diagnostic;
};

struct CorrectionSettings {
  double dtw_threshold = 130.0;
  double reference_margin_s = 0.5;
  double conf_threshold = 0.5;
};

/// Compares the segment's pitch-class sequence with the song's note track
/// over [song_t0, song_t1) widened by the reference margin.
///
/// A null track is a configuration error (ConfigError). Pitch-tracker
/// failures and reference windows outside the track fail closed to
/// non_reaction with a diagnostic.
CorrectionOutcome correct_with_music(const PipelineLabel& label, const PitchQuery& query,
                                     const PitchTracker& tracker,
                                     const musicinfo::NoteTrack* track, double song_t0,
                                     double song_t1, const CorrectionSettings& settings = {});

}  // namespace earreact::vocal
