#include "earreact/vocal/correction.hpp"

#include "earreact/core/errors.hpp"
#include "earreact/dsp/dtw.hpp"

namespace earreact::vocal {

ReactionLabel decide_correction(const PipelineLabel& label, double dtw_distance,
                                double dtw_threshold) {
  if (label.is_final()) throw ParameterError("correction applies to ambiguous or uncertain labels");
  if (dtw_distance > dtw_threshold) return ReactionLabel::kNonReaction;
  // ambiguous carries singing_humming as its candidate.
  return label.label();
}

dsp::ChromaSeq chroma_from_pitch(std::span<const PitchEstimate> estimates, double conf_threshold) {
  dsp::ChromaSeq seq;
  seq.reserve(estimates.size());
  for (const auto& e : estimates) {
    seq.push_back(dsp::hz_to_chroma(e.f0_hz, e.confidence, conf_threshold));
  }
  return seq;
}

CorrectionOutcome correct_with_music(const PipelineLabel& label, const PitchQuery& query,
                                     const PitchTracker& tracker,
                                     const musicinfo::NoteTrack* track, double song_t0,
                                     double song_t1, const CorrectionSettings& settings) {
  if (label.is_final()) throw ParameterError("correction applies to ambiguous or uncertain labels");
  if (track == nullptr) throw ConfigError("music correction needs a note track for the song");

  CorrectionOutcome out;
  dsp::ChromaSeq observed;
  dsp::ChromaSeq reference;
  try {
    observed = chroma_from_pitch(tracker.track(query), settings.conf_threshold);
    reference = musicinfo::note_window(*track, song_t0, song_t1, settings.reference_margin_s);
  } catch (const std::exception& e) {
    out.diagnostic = std::string("correction failed closed: ") + e.what();
    return out;
  }
  if (observed.empty()) {
    out.diagnostic = "correction failed closed: pitch tracker returned no estimates";
    return out;
  }
  const double d = dsp::dtw_distance(observed, reference);
  out.distance = d;
  out.label = decide_correction(label, d, settings.dtw_threshold);
  return out;
}

}  // namespace earreact::vocal
