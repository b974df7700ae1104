#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "earreact/core/events.hpp"
#include "earreact/core/session.hpp"
#include "earreact/musicinfo/note_track.hpp"
#include "earreact/vocal/pitch_tracker.hpp"
#include "earreact/vocal/scores.hpp"

namespace earreact::harness {

/// Noise and confusion levels of a listening place. Non-reaction seconds draw
/// a motion state (still, fidget, exercise) and possibly a nearby talker or
/// music source; the oracle classifier confuses reactions at the given rates.
struct PlaceProfile {
  std::string name;
  std::string ambient_class;  // top-1 class of quiet non-reaction seconds
  double noise_db = 40.0;
  double distractor_rate = 0.0;  // per non-reaction second
  double p_still = 0.8;
  double p_fidget = 0.18;        // remainder is exercise-level motion
  double still_level_low_g = 0.002;
  double still_level_high_g = 0.007;
  double singing_as_ambiguous = 0.5;  // singing emitted as speech/music
  double low_margin_rate = 0.1;       // reaction displaced below an irrelevant top-1
  double false_positive_rate = 0.0;   // non-reaction emitted as singing
  double pitch_error_rate = 0.03;     // sung hop off by a semitone
};

/// Presets "lounge", "office", "car", "cafe". Throws ConfigError otherwise.
const PlaceProfile& place_profile(const std::string& name);
const std::vector<std::string>& place_names();

/// Class list of the oracle classifier.
const std::vector<std::string>& oracle_classes();

struct ScriptSpan {
  double t_start = 0.0;
  double t_end = 0.0;
  ReactionLabel label = ReactionLabel::kNonReaction;
};

/// Forces the motion state of every non-reaction second.
enum class Activity { kProfile, kStill, kExercise };

struct SyntheticSpec {
  std::string session_id = "session";
  std::string subject_id = "subject";
  std::string song_id = "song";
  double duration_s = 60.0;
  std::vector<ScriptSpan> script;
  std::string place = "lounge";
  std::uint64_t seed = 0;
  /// Negative: drawn from the seed on a 0.1 s grid in [1, 20].
  double start_offset_in_song = -1.0;
  Activity activity = Activity::kProfile;
  bool with_audio = true;

  /// Throws ParameterError for overlapping or out-of-range spans, a
  /// non-positive duration or an unknown place.
  void validate() const;
};

struct SyntheticSession {
  Session session;
  /// Per-second ground truth over floor(duration) seconds.
  std::vector<ReactionLabel> truth;
  musicinfo::NoteTrack notes;
  std::vector<vocal::ScoreRecord> scores;   // one per second
  std::vector<vocal::PitchEstimate> pitch;  // one per 0.1 s hop
  /// Generated movement level of each second, in g.
  std::vector<double> movement_level;
  /// Seconds whose audio carries a nearby talker or music source.
  std::vector<bool> distractor;

  std::vector<ReactionEvent> truth_events() const;
};

/// Truth as seen by each detector: the other family's labels become non_reaction.
std::vector<ReactionLabel> vocal_truth(std::span<const ReactionLabel> truth);
std::vector<ReactionLabel> motion_truth(std::span<const ReactionLabel> truth);

/// Melody of a song: random-walk pitch classes, notes of 0.2-0.6 s separated
/// by occasional short rests. Deterministic in (song_id, seed).
musicinfo::NoteTrack generate_note_track(const std::string& song_id, double duration_s,
                                         std::uint64_t seed);

/// Deterministic under spec.seed. The note track is generated from
/// (song_id, song_seed) so sessions of one song share it.
SyntheticSession generate_session(const SyntheticSpec& spec, std::uint64_t song_seed = 0);

/// Writes the session directory (meta.json, imu.csv, audio.wav when present,
/// scores.jsonl, pitch.csv, labels.csv) and `<notes_dir>/<song_id>.csv`.
void write_session_dir(const std::filesystem::path& dir, const SyntheticSession& s,
                       const std::filesystem::path& notes_dir);

enum class CorpusKind { kVocal, kMotion, kMixed };

struct CorpusSpec {
  std::size_t subjects = 10;
  std::size_t sessions_per_subject = 3;
  /// Sessions per subject with an empty script, on top of the scripted ones.
  std::size_t empty_sessions_per_subject = 0;
  std::size_t songs = 5;
  double duration_s = 60.0;
  std::string place = "lounge";
  CorpusKind kind = CorpusKind::kVocal;
  Activity activity = Activity::kProfile;
  bool with_audio = true;
  std::uint64_t seed = 0;
};

/// Random scripts of integer-second spans; subject ids "u00".., session ids
/// "u00_s0".., song ids "song0"...
std::vector<SyntheticSession> generate_corpus(const CorpusSpec& spec);

/// Note tracks of every song in a corpus.
musicinfo::MusicInfoStore note_store(const std::vector<SyntheticSession>& corpus);

/// Engagement data: reaction events of a listening session with the rating
/// and familiarity that drove them. Reaction time grows with the rating;
/// known songs draw more singing, unknown ones more head motion.
struct EngagementSample {
  std::string subject_id;
  std::string song_id;
  double duration_s = 180.0;
  std::vector<ReactionEvent> vocal_events;
  std::vector<ReactionEvent> motion_events;
  int rating = 3;
  bool known = false;
};

std::vector<EngagementSample> generate_engagement_samples(std::size_t subjects,
                                                          std::size_t per_subject,
                                                          std::uint64_t seed);

/// JSON forms used by the command line. A spec document with a "corpus"
/// object describes a corpus; otherwise it is a single session.
SyntheticSpec synthetic_spec_from_json(const std::string& text);
CorpusSpec corpus_spec_from_json(const std::string& text);
bool is_corpus_spec(const std::string& text);

}  // namespace earreact::harness
