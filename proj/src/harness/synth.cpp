#include "earreact/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "earreact/core/errors.hpp"
#include "earreact/core/session_io.hpp"
#include "json.hpp"

namespace earreact::harness {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr double kImuRate = 70.0;
constexpr double kAudioRate = 44100.0;
constexpr double kHop = 0.1;
constexpr double kCalibrationDb = 94.0;
constexpr double kReactionDb = 65.0;
constexpr double kDistractorDb = 60.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(engine_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

double db_to_rms(double db) { return std::pow(10.0, (db - kCalibrationDb) / 20.0); }

double midi_to_hz(double midi) { return 440.0 * std::pow(2.0, (midi - 69.0) / 12.0); }

enum class MotionState { kStill, kFidget, kExercise, kVocal, kNod };

// What each second of the session carries.
struct SecondPlan {
  ReactionLabel truth = ReactionLabel::kNonReaction;
  MotionState motion = MotionState::kStill;
  bool distractor = false;
  double level = 0.0;
};

std::vector<PlaceProfile> make_profiles() {
  std::vector<PlaceProfile> p(4);
  p[0] = {"lounge", "silence", 38.0, 0.03, 0.80, 0.18, 0.002, 0.007, 0.50, 0.10, 0.005, 0.03};
  p[1] = {"office", "typing", 45.0, 0.06, 0.80, 0.18, 0.002, 0.007, 0.55, 0.15, 0.010, 0.04};
  p[2] = {"car", "vehicle", 60.0, 0.05, 0.75, 0.22, 0.004, 0.009, 0.60, 0.20, 0.015, 0.05};
  p[3] = {"cafe", "chatter", 56.0, 0.20, 0.72, 0.25, 0.002, 0.008, 0.70, 0.25, 0.030, 0.06};
  return p;
}

// Scores with `top` at the leading ranks. A high-margin vector has
// top-1 - top-2 >= 0.9; a low-margin one has a gap of 0.05-0.2.
vocal::ScoreRecord make_scores(Rng& rng, std::size_t index, const std::vector<std::string>& top,
                               bool high_margin) {
  vocal::ScoreRecord rec;
  rec.index = index;
  std::vector<std::string> rest;
  for (const auto& c : oracle_classes()) {
    if (std::find(top.begin(), top.end(), c) == top.end()) rest.push_back(c);
  }
  std::shuffle(rest.begin(), rest.end(), rng.engine());

  std::vector<double> lead;
  if (high_margin) {
    lead.push_back(rng.uniform(0.93, 0.97));
  } else {
    const double w0 = rng.uniform(0.4, 0.5);
    lead.push_back(w0);
    lead.push_back(w0 - rng.uniform(0.05, 0.2));
  }
  double used = 0.0;
  for (double w : lead) used += w;
  const double remainder = 1.0 - used;

  rec.classes = top;
  rec.classes.insert(rec.classes.end(), rest.begin(), rest.end());
  // Every tail share stays below the smallest lead weight.
  std::vector<double> raw(rec.classes.size() - lead.size());
  double raw_sum = 0.0;
  for (auto& r : raw) {
    r = rng.uniform(0.5, 1.0);
    raw_sum += r;
  }
  std::sort(raw.begin(), raw.end(), std::greater<>());
  rec.scores = lead;
  for (double r : raw) rec.scores.push_back(remainder * r / raw_sum);
  return rec;
}

const std::string& pick(Rng& rng, std::initializer_list<const char*> names,
                        std::vector<std::string>& storage) {
  storage.assign(names.begin(), names.end());
  return storage[static_cast<std::size_t>(rng.integer(0, static_cast<int>(storage.size()) - 1))];
}

vocal::ScoreRecord oracle_scores(Rng& rng, std::size_t index, const SecondPlan& plan,
                                 const PlaceProfile& profile) {
  std::vector<std::string> tmp;
  const std::string ambient = profile.ambient_class;
  switch (plan.truth) {
    case ReactionLabel::kSingingHumming: {
      const bool ambiguous = rng.chance(profile.singing_as_ambiguous);
      const std::string vocal = ambiguous ? pick(rng, {"speech", "music"}, tmp)
                                          : pick(rng, {"singing", "humming"}, tmp);
      if (rng.chance(profile.low_margin_rate)) return make_scores(rng, index, {ambient, vocal}, false);
      return make_scores(rng, index, {vocal}, rng.chance(0.7));
    }
    case ReactionLabel::kWhistling:
      if (rng.chance(profile.low_margin_rate)) {
        return make_scores(rng, index, {"wind instrument", "whistling"}, false);
      }
      return make_scores(rng, index, {"whistling"}, true);
    default:
      break;
  }
  if (rng.chance(profile.false_positive_rate)) return make_scores(rng, index, {"singing"}, true);
  if (plan.distractor) {
    const std::string src = rng.chance(0.8) ? pick(rng, {"speech", "music"}, tmp) : "chatter";
    return make_scores(rng, index, {src}, rng.chance(0.6));
  }
  if (rng.chance(0.3)) {
    if (rng.chance(0.5)) {
      return make_scores(rng, index, {ambient, pick(rng, {"speech", "music"}, tmp)}, false);
    }
    return make_scores(rng, index, {ambient}, false);
  }
  return make_scores(rng, index, {ambient}, true);
}

// Gravity plus white noise, then each second's magnitude deviations are
// rescaled so its movement level equals the planned one.
void synth_accel(Rng& rng, std::vector<ImuSample>& imu, const std::vector<SecondPlan>& plan) {
  for (auto& s : imu) {
    s.accel = {rng.normal(0.05), rng.normal(0.05), 1.0 + rng.normal(0.05)};
  }
  std::size_t begin = 0;
  while (begin < imu.size()) {
    const auto second = static_cast<std::size_t>(std::floor(imu[begin].t));
    std::size_t end = begin;
    while (end < imu.size() && static_cast<std::size_t>(std::floor(imu[end].t)) == second) ++end;
    const double target = second < plan.size() ? plan[second].level : plan.back().level;
    const std::size_t n = end - begin;
    if (n >= 2) {
      std::vector<double> mag(n);
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = imu[begin + i].accel;
        mag[i] = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
        mean += mag[i];
      }
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (double m : mag) var += (m - mean) * (m - mean);
      const double sd = std::sqrt(var / static_cast<double>(n));
      const double scale = sd > 0.0 ? target / sd : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double m_new = mean + (mag[i] - mean) * scale;
        for (auto& v : imu[begin + i].accel) v *= m_new / mag[i];
      }
    }
    begin = end;
  }
}

void synth_gyro(Rng& rng, std::vector<ImuSample>& imu, const std::vector<SecondPlan>& plan,
                const std::vector<ScriptSpan>& script) {
  // Per nod span: frequency, amplitude and phase.
  struct Nod {
    double t0, t1, hz, amp, phase;
  };
  std::vector<Nod> nods;
  for (const auto& s : script) {
    if (s.label != ReactionLabel::kHeadMotion) continue;
    nods.push_back({s.t_start, s.t_end, rng.uniform(1.0, 3.0), rng.uniform(15.0, 40.0),
                    rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  for (auto& s : imu) {
    const auto second = static_cast<std::size_t>(std::floor(s.t));
    const MotionState state = second < plan.size() ? plan[second].motion : MotionState::kStill;
    double sigma = 0.3;
    if (state == MotionState::kFidget) sigma = 6.0;
    if (state == MotionState::kExercise) sigma = 40.0;
    if (state == MotionState::kVocal) sigma = 2.0;
    if (state == MotionState::kNod) sigma = 1.0;
    s.gyro = {rng.normal(sigma), rng.normal(sigma), rng.normal(sigma)};
    for (const auto& nod : nods) {
      if (s.t >= nod.t0 && s.t < nod.t1) {
        s.gyro[1] += nod.amp * std::sin(2.0 * std::numbers::pi * nod.hz * s.t + nod.phase);
      }
    }
  }
}

// Harmonic oscillator following per-hop f0. The carrier is a unit phasor
// advanced by complex rotation; harmonics are its powers.
void add_voice(std::vector<float>& audio, std::size_t first_hop, std::size_t last_hop,
               const std::vector<double>& f0, double rms, bool pure, std::complex<double>& z) {
  const double norm = pure ? std::sqrt(0.5) : std::sqrt((1.0 + 0.25 + 0.0625) / 2.0);
  const double amp = rms / norm;
  for (std::size_t h = first_hop; h < last_hop; ++h) {
    if (f0[h] <= 0.0) continue;
    const auto s0 = static_cast<std::size_t>(std::llround(static_cast<double>(h) * kHop * kAudioRate));
    const auto s1 = std::min(audio.size(), static_cast<std::size_t>(
                                               std::llround(static_cast<double>(h + 1) * kHop * kAudioRate)));
    const std::complex<double> step = std::polar(1.0, 2.0 * std::numbers::pi * f0[h] / kAudioRate);
    for (std::size_t i = s0; i < s1; ++i) {
      z *= step;
      double v = z.imag();
      if (!pure) {
        const std::complex<double> z2 = z * z;
        v += 0.5 * z2.imag() + 0.25 * (z2 * z).imag();
      }
      audio[i] += static_cast<float>(amp * v);
    }
    z /= std::abs(z);
  }
}

ReactionLabel script_label_at(const std::vector<ScriptSpan>& script, double t) {
  for (const auto& s : script) {
    if (t >= s.t_start && t < s.t_end) return s.label;
  }
  return ReactionLabel::kNonReaction;
}

}  // namespace

const std::vector<std::string>& place_names() {
  static const std::vector<std::string> names = {"lounge", "office", "car", "cafe"};
  return names;
}

const PlaceProfile& place_profile(const std::string& name) {
  static const std::vector<PlaceProfile> profiles = make_profiles();
  for (const auto& p : profiles) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown place profile: " + name);
}

const std::vector<std::string>& oracle_classes() {
  static const std::vector<std::string> classes = {
      "speech", "music",   "singing", "humming", "whistling",
      "silence", "chatter", "typing",  "vehicle", "wind instrument"};
  return classes;
}

void SyntheticSpec::validate() const {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ParameterError("synthetic session duration must be positive");
  }
  place_profile(place);
  auto spans = script;
  std::sort(spans.begin(), spans.end(),
            [](const ScriptSpan& a, const ScriptSpan& b) { return a.t_start < b.t_start; });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (!(s.t_start < s.t_end) || s.t_start < 0.0 || s.t_end > duration_s) {
      throw ParameterError("script span outside the session or empty");
    }
    if (i > 0 && s.t_start < spans[i - 1].t_end) throw ParameterError("overlapping script spans");
  }
}

std::vector<ReactionEvent> SyntheticSession::truth_events() const {
  return merge_labels_to_events(truth);
}

std::vector<ReactionLabel> vocal_truth(std::span<const ReactionLabel> truth) {
  std::vector<ReactionLabel> out(truth.begin(), truth.end());
  for (auto& l : out) {
    if (l == ReactionLabel::kHeadMotion) l = ReactionLabel::kNonReaction;
  }
  return out;
}

std::vector<ReactionLabel> motion_truth(std::span<const ReactionLabel> truth) {
  std::vector<ReactionLabel> out(truth.begin(), truth.end());
  for (auto& l : out) {
    if (l != ReactionLabel::kHeadMotion) l = ReactionLabel::kNonReaction;
  }
  return out;
}

musicinfo::NoteTrack generate_note_track(const std::string& song_id, double duration_s,
                                         std::uint64_t seed) {
  Rng rng(fnv1a(song_id) ^ splitmix64(seed));
  const auto hops = static_cast<std::size_t>(std::ceil(duration_s / kHop - 1e-9));
  musicinfo::NoteTrack track;
  track.song_id = song_id;
  int pc = rng.integer(0, 11);
  static constexpr int kSteps[] = {-3, -2, -2, -1, -1, 1, 1, 2, 2, 3, 5, -5};
  while (track.symbols.size() < hops) {
    const int len = rng.integer(2, 6);
    for (int i = 0; i < len && track.symbols.size() < hops; ++i) {
      track.symbols.push_back(dsp::Chroma::pitch_class(pc));
    }
    if (rng.chance(0.15)) {
      const int rest = rng.integer(1, 2);
      for (int i = 0; i < rest && track.symbols.size() < hops; ++i) {
        track.symbols.push_back(dsp::Chroma::unvoiced());
      }
    }
    pc = ((pc + kSteps[rng.integer(0, 11)]) % 12 + 12) % 12;
  }
  return track;
}

SyntheticSession generate_session(const SyntheticSpec& spec, std::uint64_t song_seed) {
  spec.validate();
  const PlaceProfile& profile = place_profile(spec.place);
  Rng rng(spec.seed);

  SyntheticSession out;
  Session& session = out.session;
  session.id = spec.session_id;
  session.subject_id = spec.subject_id;
  session.song_id = spec.song_id;
  session.place_tag = spec.place;
  session.start_offset_in_song = spec.start_offset_in_song >= 0.0
                                     ? spec.start_offset_in_song
                                     : static_cast<double>(rng.integer(10, 200)) * kHop;
  out.notes = generate_note_track(spec.song_id,
                                  std::ceil(session.start_offset_in_song + spec.duration_s + 2.0),
                                  song_seed);

  const auto seconds = static_cast<std::size_t>(std::floor(spec.duration_s + 1e-9));
  std::vector<ReactionEvent> spans;
  for (const auto& s : spec.script) spans.push_back({s.label, s.t_start, s.t_end});
  out.truth = expand_events_to_labels(spans, seconds);

  // Plan every second, including a trailing partial one.
  const std::size_t planned = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(spec.duration_s)));
  std::vector<SecondPlan> plan(planned);
  for (std::size_t k = 0; k < planned; ++k) {
    auto& p = plan[k];
    p.truth = k < seconds ? out.truth[k] : ReactionLabel::kNonReaction;
    switch (p.truth) {
      case ReactionLabel::kSingingHumming:
      case ReactionLabel::kWhistling:
        p.motion = MotionState::kVocal;
        p.level = rng.uniform(0.025, 0.06);
        break;
      case ReactionLabel::kHeadMotion:
        p.motion = MotionState::kNod;
        p.level = rng.uniform(0.02, 0.08);
        break;
      case ReactionLabel::kNonReaction: {
        const double r = rng.uniform(0.0, 1.0);
        if (spec.activity == Activity::kStill ||
            (spec.activity == Activity::kProfile && r < profile.p_still)) {
          p.motion = MotionState::kStill;
          p.level = rng.uniform(profile.still_level_low_g, profile.still_level_high_g);
        } else if (spec.activity == Activity::kExercise ||
                   r >= profile.p_still + profile.p_fidget) {
          p.motion = MotionState::kExercise;
          p.level = rng.uniform(0.15, 0.3);
        } else {
          p.motion = MotionState::kFidget;
          p.level = rng.uniform(0.015, 0.09);
        }
        p.distractor = rng.chance(profile.distractor_rate);
        break;
      }
    }
  }
  for (std::size_t k = 0; k < seconds; ++k) {
    out.movement_level.push_back(plan[k].level);
    out.distractor.push_back(plan[k].distractor);
  }

  // IMU on an exact 70 Hz grid.
  const auto n_imu = static_cast<std::size_t>(std::floor(spec.duration_s * kImuRate + 1e-9));
  session.imu.resize(n_imu);
  for (std::size_t j = 0; j < n_imu; ++j) session.imu[j].t = static_cast<double>(j) / kImuRate;
  synth_accel(rng, session.imu, plan);
  synth_gyro(rng, session.imu, plan, spec.script);

  // Pitch per hop: the sung melody inside vocal spans, a wandering talker
  // during distractors, unvoiced elsewhere.
  const auto hops = static_cast<std::size_t>(std::floor(spec.duration_s / kHop + 1e-9));
  const auto offset_hops = static_cast<std::size_t>(std::llround(session.start_offset_in_song / kHop));
  std::vector<double> voice_f0(hops, 0.0);
  std::vector<double> talk_f0(hops, 0.0);
  std::vector<bool> pure(hops, false);
  std::vector<int> span_octave(spec.script.size());
  for (auto& o : span_octave) o = rng.integer(-1, 1);
  out.pitch.resize(hops);
  for (std::size_t h = 0; h < hops; ++h) {
    const double t = static_cast<double>(h) * kHop;
    auto& est = out.pitch[h];
    est.t = t;
    const double mid = t + kHop / 2.0;
    const ReactionLabel label = script_label_at(spec.script, mid);
    const auto second = static_cast<std::size_t>(std::floor(mid));
    if (label == ReactionLabel::kSingingHumming || label == ReactionLabel::kWhistling) {
      std::size_t span_idx = 0;
      for (std::size_t i = 0; i < spec.script.size(); ++i) {
        if (mid >= spec.script[i].t_start && mid < spec.script[i].t_end) span_idx = i;
      }
      const auto sym = out.notes.symbols[std::min(offset_hops + h, out.notes.symbols.size() - 1)];
      if (!sym.voiced()) {
        est.f0_hz = 0.0;
        est.confidence = rng.uniform(0.0, 0.2);
        continue;
      }
      int pc = sym.value();
      if (rng.chance(profile.pitch_error_rate)) pc += rng.chance(0.5) ? 1 : -1;
      const bool whistle = label == ReactionLabel::kWhistling;
      const int base = whistle ? 72 + std::min(0, span_octave[span_idx]) * 12
                               : 60 + span_octave[span_idx] * 12;
      est.f0_hz = midi_to_hz(base + pc + rng.uniform(-0.2, 0.2));
      est.confidence = rng.uniform(0.8, 0.95);
      voice_f0[h] = est.f0_hz;
      pure[h] = whistle;
    } else if (second < plan.size() && plan[second].distractor) {
      est.f0_hz = rng.uniform(100.0, 300.0);
      est.confidence = rng.uniform(0.6, 0.9);
      talk_f0[h] = est.f0_hz;
    } else {
      est.f0_hz = 0.0;
      est.confidence = rng.uniform(0.0, 0.2);
    }
  }

  if (spec.with_audio) {
    const auto n_audio = static_cast<std::size_t>(std::floor(spec.duration_s * kAudioRate + 1e-9));
    session.audio.resize(n_audio);
    // Background noise: each second reads a random offset of a per-session
    // Gaussian bed.
    const double noise = db_to_rms(profile.noise_db);
    std::normal_distribution<float> gauss(0.0f, static_cast<float>(noise));
    std::vector<float> bed(1u << 17);
    for (auto& v : bed) v = gauss(rng.engine());
    const auto block = static_cast<std::size_t>(kAudioRate);
    for (std::size_t start = 0; start < n_audio; start += block) {
      const auto offset = static_cast<std::size_t>(rng.integer(0, static_cast<int>(bed.size() - block)));
      const std::size_t len = std::min(block, n_audio - start);
      std::copy_n(bed.begin() + static_cast<long>(offset), len, session.audio.begin() + static_cast<long>(start));
    }
    std::complex<double> voice{1.0, 0.0};
    // Whistled and sung hops alternate only at span boundaries.
    std::size_t h = 0;
    while (h < hops) {
      std::size_t e = h;
      while (e < hops && pure[e] == pure[h]) ++e;
      add_voice(session.audio, h, e, voice_f0, db_to_rms(kReactionDb), pure[h], voice);
      h = e;
    }
    std::complex<double> talk{1.0, 0.0};
    add_voice(session.audio, 0, hops, talk_f0, db_to_rms(kDistractorDb), false, talk);
  }

  for (std::size_t k = 0; k < seconds; ++k) {
    out.scores.push_back(oracle_scores(rng, k, plan[k], profile));
  }
  return out;
}

void write_session_dir(const fs::path& dir, const SyntheticSession& s, const fs::path& notes_dir) {
  fs::create_directories(dir);
  fs::create_directories(notes_dir);
  write_session(dir, s.session);
  {
    std::ofstream out(dir / "scores.jsonl");
    vocal::write_scores_jsonl(out, s.scores);
  }
  {
    std::ofstream out(dir / "pitch.csv");
    vocal::write_pitch_csv(out, s.pitch);
  }
  {
    std::ofstream out(dir / "labels.csv");
    const auto events = s.truth_events();
    write_label_spans_csv(out, events);
  }
  {
    std::ofstream out(notes_dir / (s.notes.song_id + ".csv"));
    musicinfo::write_note_track(out, s.notes);
  }
}

std::vector<SyntheticSession> generate_corpus(const CorpusSpec& spec) {
  if (spec.subjects == 0 || spec.songs == 0) throw ParameterError("corpus needs subjects and songs");
  Rng rng(spec.seed ^ 0x5eed5eedULL);
  std::vector<SyntheticSession> corpus;
  const auto duration = static_cast<int>(std::floor(spec.duration_s));
  for (std::size_t u = 0; u < spec.subjects; ++u) {
    const std::size_t total = spec.sessions_per_subject + spec.empty_sessions_per_subject;
    for (std::size_t k = 0; k < total; ++k) {
      SyntheticSpec s;
      char subject[24];
      std::snprintf(subject, sizeof subject, "u%02zu", u);
      s.subject_id = subject;
      s.session_id = s.subject_id + "_s" + std::to_string(k);
      s.song_id = "song" + std::to_string(static_cast<std::size_t>(rng.integer(0, static_cast<int>(spec.songs) - 1)));
      s.duration_s = spec.duration_s;
      s.place = spec.place;
      s.activity = spec.activity;
      s.with_audio = spec.with_audio;
      s.seed = splitmix64(spec.seed * 1000003ULL + u * 1009ULL + k);
      if (k < spec.sessions_per_subject) {
        const bool motion = spec.kind == CorpusKind::kMotion;
        int t = rng.integer(3, 10);
        while (true) {
          const int len = motion ? rng.integer(8, 20) : rng.integer(4, 12);
          if (t + len > duration - 1) break;
          ReactionLabel label;
          if (spec.kind == CorpusKind::kMotion) {
            label = ReactionLabel::kHeadMotion;
          } else {
            const double r = rng.uniform(0.0, 1.0);
            label = r < 0.6 ? ReactionLabel::kSingingHumming : ReactionLabel::kWhistling;
            if (spec.kind == CorpusKind::kMixed && r > 0.8) label = ReactionLabel::kHeadMotion;
          }
          s.script.push_back({static_cast<double>(t), static_cast<double>(t + len), label});
          t += len + (motion ? rng.integer(8, 20) : rng.integer(5, 14));
        }
      }
      corpus.push_back(generate_session(s, spec.seed));
    }
  }
  return corpus;
}

musicinfo::MusicInfoStore note_store(const std::vector<SyntheticSession>& corpus) {
  musicinfo::MusicInfoStore store;
  std::map<std::string, const musicinfo::NoteTrack*> longest;
  for (const auto& s : corpus) {
    auto& slot = longest[s.notes.song_id];
    if (slot == nullptr || slot->symbols.size() < s.notes.symbols.size()) slot = &s.notes;
  }
  for (const auto& [id, track] : longest) store.add(*track);
  return store;
}

namespace {

std::vector<ReactionEvent> place_events(Rng& rng, double duration, double fraction,
                                        ReactionLabel label, int min_len, int max_len) {
  const auto total = static_cast<int>(std::llround(std::clamp(fraction, 0.0, 0.9) * duration));
  std::vector<int> lengths;
  int left = total;
  while (left > 0) {
    int len = std::min(left, rng.integer(min_len, max_len));
    lengths.push_back(len);
    left -= len;
  }
  std::vector<ReactionEvent> events;
  if (lengths.empty()) return events;
  // Split the free time into len+1 random gaps.
  const double free = duration - total;
  std::vector<double> w(lengths.size() + 1);
  double wsum = 0.0;
  for (auto& x : w) {
    x = rng.uniform(0.2, 1.0);
    wsum += x;
  }
  double t = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    t += std::floor(free * w[i] / wsum);
    events.push_back({label, t, t + lengths[i]});
    t += lengths[i];
  }
  return events;
}

}  // namespace

std::vector<EngagementSample> generate_engagement_samples(std::size_t subjects,
                                                          std::size_t per_subject,
                                                          std::uint64_t seed) {
  Rng rng(seed ^ 0xe46a6eULL);
  std::vector<EngagementSample> out;
  for (std::size_t u = 0; u < subjects; ++u) {
    for (std::size_t k = 0; k < per_subject; ++k) {
      EngagementSample s;
      char subject[24];
      std::snprintf(subject, sizeof subject, "u%02zu", u);
      s.subject_id = subject;
      s.song_id = "song" + std::to_string(k);
      s.rating = rng.integer(1, 5);
      s.known = rng.chance(0.5);
      const double e = std::clamp((s.rating - 1) / 4.0 + rng.normal(0.03), 0.0, 1.0);
      const double sing = s.known ? 0.05 + 0.35 * e : 0.06 * e;
      const double whistle = s.known ? 0.02 * e : 0.04 * e;
      const double nod = s.known ? 0.05 + 0.15 * e : 0.05 + 0.45 * e;
      auto vocal = place_events(rng, s.duration_s, sing, ReactionLabel::kSingingHumming, 4, 12);
      // Whistling fills gaps between singing events only when one fits.
      auto whistles = place_events(rng, s.duration_s, whistle, ReactionLabel::kWhistling, 2, 4);
      for (const auto& w : whistles) {
        const bool overlaps = std::any_of(vocal.begin(), vocal.end(), [&](const ReactionEvent& v) {
          return w.t_start < v.t_end && v.t_start < w.t_end;
        });
        if (!overlaps) vocal.push_back(w);
      }
      std::sort(vocal.begin(), vocal.end(),
                [](const auto& a, const auto& b) { return a.t_start < b.t_start; });
      s.vocal_events = std::move(vocal);
      s.motion_events = place_events(rng, s.duration_s, nod, ReactionLabel::kHeadMotion, 5, 15);
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

Activity activity_from_string(const std::string& s) {
  if (s.empty() || s == "profile") return Activity::kProfile;
  if (s == "still") return Activity::kStill;
  if (s == "exercise") return Activity::kExercise;
  throw ParseError("unknown activity: " + s);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ParseError(std::string("unknown key in ") + what + ": " + key);
    }
  }
}

}  // namespace

bool is_corpus_spec(const std::string& text) {
  try {
    const json j = json::parse(text);
    return j.is_object() && j.contains("corpus");
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid spec JSON: ") + e.what());
  }
}

SyntheticSpec synthetic_spec_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    check_keys(j,
               {"session_id", "subject_id", "song_id", "duration_s", "script", "place", "seed",
                "start_offset_in_song", "activity", "with_audio"},
               "session spec");
    SyntheticSpec s;
    s.session_id = j.value("session_id", s.session_id);
    s.subject_id = j.value("subject_id", s.subject_id);
    s.song_id = j.value("song_id", s.song_id);
    s.duration_s = j.value("duration_s", s.duration_s);
    s.place = j.value("place", s.place);
    s.seed = j.value("seed", s.seed);
    s.start_offset_in_song = j.value("start_offset_in_song", s.start_offset_in_song);
    s.activity = activity_from_string(j.value("activity", std::string()));
    s.with_audio = j.value("with_audio", s.with_audio);
    for (const auto& span : j.value("script", json::array())) {
      s.script.push_back({span.at("t_start").get<double>(), span.at("t_end").get<double>(),
                          label_from_string(span.at("label").get<std::string>())});
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid session spec: ") + e.what());
  }
}

CorpusSpec corpus_spec_from_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    check_keys(root, {"corpus", "seed"}, "corpus spec");
    const json& j = root.at("corpus");
    check_keys(j,
               {"subjects", "sessions_per_subject", "empty_sessions_per_subject", "songs",
                "duration_s", "place", "kind", "activity", "with_audio"},
               "corpus");
    CorpusSpec c;
    c.subjects = j.value("subjects", c.subjects);
    c.sessions_per_subject = j.value("sessions_per_subject", c.sessions_per_subject);
    c.empty_sessions_per_subject = j.value("empty_sessions_per_subject", c.empty_sessions_per_subject);
    c.songs = j.value("songs", c.songs);
    c.duration_s = j.value("duration_s", c.duration_s);
    c.place = j.value("place", c.place);
    place_profile(c.place);
    const auto kind = j.value("kind", std::string("vocal"));
    if (kind == "vocal") {
      c.kind = CorpusKind::kVocal;
    } else if (kind == "motion") {
      c.kind = CorpusKind::kMotion;
    } else if (kind == "mixed") {
      c.kind = CorpusKind::kMixed;
    } else {
      throw ParseError("unknown corpus kind: " + kind);
    }
    c.activity = activity_from_string(j.value("activity", std::string()));
    c.with_audio = j.value("with_audio", c.with_audio);
    c.seed = root.value("seed", c.seed);
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid corpus spec: ") + e.what());
  }
}

}  // namespace earreact::harness
