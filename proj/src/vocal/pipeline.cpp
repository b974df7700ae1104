#include "earreact/vocal/pipeline.hpp"

#include "earreact/core/errors.hpp"
#include "earreact/dsp/logmel.hpp"
#include "earreact/vocal/correction.hpp"
#include "json.hpp"

namespace earreact {

std::string stats_to_json(const FilteringStats& stats) {
  nlohmann::json j;
  j["total_segments"] = stats.total_segments;
  j["motion_filtered"] = stats.motion_filtered;
  j["sound_filtered"] = stats.sound_filtered;
  j["classified"] = stats.classified;
  j["filtering_ratio"] = stats.filtering_ratio();
  return j.dump(2) + "\n";
}

FilteringStats stats_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    FilteringStats s;
    s.total_segments = j.at("total_segments").get<std::size_t>();
    s.motion_filtered = j.value("motion_filtered", std::size_t{0});
    s.sound_filtered = j.value("sound_filtered", std::size_t{0});
    s.classified = j.value("classified", std::size_t{0});
    if (s.filtered() > s.total_segments) throw ParseError("more filtered than total segments");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("stats file: ") + e.what());
  }
}

}  // namespace earreact

namespace earreact::vocal {

PrefilterDecision vocal_motion_prefilter(const SensorSegment& segment, double low_g,
                                         double high_g) {
  if (segment.imu.size() < 2) return PrefilterDecision::kPass;
  const auto accel = accel_of(segment.imu);
  const double level = dsp::movement_level(accel);
  return (level < low_g || level > high_g) ? PrefilterDecision::kFilteredNonReaction
                                           : PrefilterDecision::kPass;
}

PrefilterDecision vocal_sound_prefilter(const SensorSegment& segment, double threshold_db,
                                        double calibration_db) {
  if (segment.audio.empty()) return PrefilterDecision::kPass;
  return dsp::sound_level_db(segment.audio, calibration_db) < threshold_db
             ? PrefilterDecision::kFilteredNonReaction
             : PrefilterDecision::kPass;
}

VocalPipeline::VocalPipeline(VocalConfig config, const SoundEventClassifier& classifier,
                             const PitchTracker& pitch_tracker,
                             const musicinfo::MusicInfoStore* notes, const HmmParams* hmm)
    : config_(std::move(config)),
      names_(ClassNameSets::from_config(config_)),
      classifier_(classifier),
      pitch_tracker_(pitch_tracker),
      notes_(notes),
      hmm_(hmm),
      resampler_(kAudioRateHz, config_.resample_hz),
      lowpass_(config_.resample_hz, config_.preprocess_cutoff_hz) {
  if (config_.smoothing && hmm_ == nullptr) throw ConfigError("smoothing enabled without an HMM");
  if (config_.correction && notes_ == nullptr) {
    throw ConfigError("music correction enabled without a note-track store");
  }
}

VocalResult VocalPipeline::run(const Session& session) const {
  const musicinfo::NoteTrack* track = nullptr;
  if (config_.correction) {
    track = &notes_->at(session.song_id);
  }
  const auto segments = segment_session(session);
  const bool resample_needed = session.audio_rate_hz != kAudioRateHz;
  const dsp::Resampler session_resampler =
      resample_needed ? dsp::Resampler(session.audio_rate_hz, config_.resample_hz) : resampler_;

  const CorrectionSettings correction{config_.dtw_threshold, config_.reference_margin_s,
                                      config_.pitch_confidence_threshold};

  VocalResult result;
  result.stats.total_segments = segments.size();
  for (const auto& seg : segments) {
    PipelineLabel classified = PipelineLabel::final_label(ReactionLabel::kNonReaction);
    ReactionLabel label = ReactionLabel::kNonReaction;
    VocalStage stage = VocalStage::kClassifier;

    try {
      if (config_.motion_filter &&
          vocal_motion_prefilter(seg, config_.motion_low_g, config_.motion_high_g) ==
              PrefilterDecision::kFilteredNonReaction) {
        stage = VocalStage::kMotionFilter;
        ++result.stats.motion_filtered;
      } else if (config_.sound_filter &&
                 vocal_sound_prefilter(seg, config_.sound_threshold_db, config_.db_calibration) ==
                     PrefilterDecision::kFilteredNonReaction) {
        stage = VocalStage::kSoundFilter;
        ++result.stats.sound_filtered;
      } else {
        ++result.stats.classified;
        std::vector<float> preprocessed;
        std::optional<dsp::LogMelPatch> patch;
        if (!seg.audio.empty()) {
          preprocessed = lowpass_.apply(std::span<const float>(session_resampler.process(seg.audio)));
          patch = dsp::log_mel_patch(preprocessed);
        }
        const ScoreVector scores = classifier_.classify(seg.index, patch);
        classified = config_.rank_relaxation
                         ? relax_rank(scores, config_.margin_threshold, config_.top_k, names_)
                         : map_labels(scores, names_);

        if (classified.is_final()) {
          label = classified.label();
        } else if (!config_.correction) {
          label = classified.label();
        } else {
          stage = VocalStage::kCorrection;
          PitchQuery query{seg.t_start, seg.t_end, preprocessed, config_.resample_hz};
          const double song_t0 = session.start_offset_in_song + seg.t_start;
          const auto outcome = correct_with_music(classified, query, pitch_tracker_, track,
                                                  song_t0, song_t0 + (seg.t_end - seg.t_start),
                                                  correction);
          label = outcome.label;
          if (!outcome.diagnostic.empty()) {
            result.diagnostics.push_back("segment " + std::to_string(seg.index) + ": " +
                                         outcome.diagnostic);
          }
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      stage = VocalStage::kFailed;
      label = ReactionLabel::kNonReaction;
      result.diagnostics.push_back("segment " + std::to_string(seg.index) +
                                   " failed closed: " + e.what());
    }

    result.classified.push_back(classified);
    result.raw_labels.push_back(label);
    result.stages.push_back(stage);
  }

  result.labels = config_.smoothing
                      ? smooth_sequence(result.raw_labels, *hmm_, config_.smoothing_window)
                      : result.raw_labels;
  result.events = merge_labels_to_events(result.labels);
  return result;
}

}  // namespace earreact::vocal
