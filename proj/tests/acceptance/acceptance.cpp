// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "earreact/dsp/chroma.hpp"
#include "earreact/dsp/dtw.hpp"
#include "earreact/dsp/logmel.hpp"
#include "earreact/dsp/signal.hpp"
#include "earreact/engage/features.hpp"
#include "earreact/engage/recommend.hpp"
#include "earreact/engage/tree.hpp"
#include "earreact/harness/experiment.hpp"
#include "earreact/harness/loso.hpp"
#include "earreact/harness/metrics.hpp"
#include "earreact/harness/oracles.hpp"
#include "earreact/harness/synth.hpp"
#include "earreact/motion/features.hpp"
#include "earreact/motion/heuristic.hpp"
#include "earreact/vocal/hmm.hpp"

using namespace earreact;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kDtwBudgetS = 5.0;
constexpr double kViterbiBudgetS = 5.0;
constexpr double kViterbiLogTol = 1e-9;
constexpr double kLpfDcTol = 1e-3;
constexpr double kLpfCutoffTol = 0.005;
constexpr double kRmsIdentityTol = 1e-9;
constexpr double kMinFilteringRatio = 0.4;
constexpr double kAblationBudgetS = 120.0;
constexpr double kLoungeMinF1 = 0.9;
constexpr double kLoungeBudgetS = 120.0;
constexpr double kMinFlipCorrection = 0.95;
constexpr double kMotionMinF1 = 0.8;
constexpr double kActivityMinRatio = 0.9;
constexpr double kMotionBudgetS = 60.0;
constexpr double kMaxRatingMae = 0.5;
constexpr double kMinFamiliarityF1 = 0.75;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-22s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

dsp::ChromaSeq random_chroma(std::mt19937_64& rng, std::size_t max_len) {
  dsp::ChromaSeq s(1 + rng() % max_len);
  for (auto& c : s) {
    const int v = static_cast<int>(rng() % 13);
    c = v == 12 ? dsp::Chroma::unvoiced() : dsp::Chroma::pitch_class(v);
  }
  return s;
}

vocal::HmmParams random_hmm(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  auto row = [&] {
    vocal::HmmRow r{};
    double sum = 0;
    for (auto& x : r) sum += (x = u(rng));
    for (auto& x : r) x /= sum;
    return r;
  };
  vocal::HmmParams h;
  h.initial = row();
  for (auto& r : h.transition) r = row();
  for (auto& r : h.emission) r = row();
  return h;
}

std::vector<double> sine(double hz, double rate, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  return x;
}

double tone_amplitude(const std::vector<double>& x, double hz, double rate, std::size_t from) {
  double s = 0, c = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    const double ph = 2 * std::numbers::pi * hz * static_cast<double>(i) / rate;
    s += x[i] * std::sin(ph);
    c += x[i] * std::cos(ph);
  }
  return 2.0 * std::hypot(s, c) / static_cast<double>(x.size() - from);
}

void criterion_dtw() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  int equal = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = random_chroma(rng, 7);
    const auto b = random_chroma(rng, 7);
    equal += dsp::dtw_distance(a, b) == harness::dtw_oracle(a, b);
  }
  const double t = seconds_since(t0);
  report(1, "dtw-oracle", equal == 200 && t < kDtwBudgetS,
         fmt("%d/200 pairs exactly equal, %.2f s (budget %.0f s)", equal, t, kDtwBudgetS));
}

void criterion_viterbi() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  int agree = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto h = random_hmm(rng);
    std::vector<ReactionLabel> w(6);
    for (auto& l : w) l = kVocalLabels[rng() % 3];
    const auto best = vocal::viterbi(h, w);
    const auto oracle = harness::viterbi_oracle(h, w);
    const double gap = std::max(std::abs(best.log_prob - oracle.log_prob),
                                std::abs(harness::path_log_prob(h, best.path, w) - oracle.log_prob));
    worst = std::max(worst, gap);
    agree += gap <= kViterbiLogTol && vocal::smooth(w, h) == oracle.path.back();
  }
  const double t = seconds_since(t0);
  report(2, "viterbi-oracle", agree == 100 && t < kViterbiBudgetS,
         fmt("%d/100 HMMs agree, max log-prob gap %.2e (tol %.0e), %.2f s", agree, worst, kViterbiLogTol, t));
}

void criterion_shapes() {
  std::mt19937_64 rng(1003);
  std::normal_distribution<double> g(0.0, 0.2);
  int mel_ok = 0, unit_ok = 0;
  for (int i = 0; i < 50; ++i) {
    std::vector<float> audio(dsp::kLogMelInputSamples);
    for (auto& x : audio) x = static_cast<float>(g(rng));
    const auto p = dsp::log_mel_patch(audio);
    const bool finite = std::all_of(p.values().begin(), p.values().end(), [](double v) { return std::isfinite(v); });
    mel_ok += p.frames() == 96 && p.bands() == 64 && p.values().size() == 96 * 64 && finite;

    std::array<std::vector<double>, 3> gyro;
    for (auto& a : gyro) {
      a.resize(motion::kWindowSamples);
      for (auto& x : a) x = 50.0 * g(rng);
    }
    const auto u = motion::extract_motion_units({std::span<const double>(gyro[0]),
                                                 std::span<const double>(gyro[1]),
                                                 std::span<const double>(gyro[2])});
    unit_ok += u.units() == 70 && u.features() == 18 && u.unit(69).size() == 18;
  }
  report(3, "feature-shapes", mel_ok == 50 && unit_ok == 50,
         fmt("log-mel 96x64 on %d/50, motion units 70x18 on %d/50", mel_ok, unit_ok));
}

void criterion_numerics() {
  struct Case {
    double rate, cutoff;
  };
  double dc_err = 0.0, cut_err = 0.0;
  for (const Case c : {Case{16000.0, 2000.0}, Case{44100.0, 2000.0}, Case{70.0, 5.0}}) {
    const std::vector<double> one(static_cast<std::size_t>(c.rate), 1.0);
    const auto y = dsp::lowpass_first_order(one, c.rate, c.cutoff);
    dc_err = std::max(dc_err, std::abs(y.back() - 1.0));
    const auto n = static_cast<std::size_t>(c.rate * 100.0 / c.cutoff);
    const auto s = dsp::lowpass_first_order(sine(c.cutoff, c.rate, n), c.rate, c.cutoff);
    cut_err = std::max(cut_err, std::abs(tone_amplitude(s, c.cutoff, c.rate, n / 10) - 1.0 / std::sqrt(2.0)));
  }

  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> lf(std::log(80.0), std::log(4000.0));
  int octave_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const double f = std::exp(lf(rng));
    octave_ok += dsp::hz_to_chroma(f, 1.0) == dsp::hz_to_chroma(2.0 * f, 1.0);
  }

  std::normal_distribution<double> g(10.0, 40.0);
  double rms_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::array<std::vector<double>, 3> gyro;
    for (auto& a : gyro) {
      a.resize(motion::kWindowSamples);
      for (auto& x : a) x = g(rng);
    }
    const auto u = motion::extract_motion_units({std::span<const double>(gyro[0]),
                                                 std::span<const double>(gyro[1]),
                                                 std::span<const double>(gyro[2])});
    for (std::size_t k = 0; k < motion::kUnits; ++k) {
      for (std::size_t ax = 0; ax < 3; ++ax) {
        const double mean = u.at(k, motion::feature_index(ax, motion::UnitStat::kMean));
        const double sd = u.at(k, motion::feature_index(ax, motion::UnitStat::kStd));
        const double rms = u.at(k, motion::feature_index(ax, motion::UnitStat::kRms));
        rms_err = std::max(rms_err, std::abs(rms * rms - mean * mean - sd * sd) / std::max(1.0, rms * rms));
      }
    }
  }
  report(4, "dsp-numerics",
         dc_err <= kLpfDcTol && cut_err <= kLpfCutoffTol && octave_ok == 1000 && rms_err <= kRmsIdentityTol,
         fmt("LPF DC err %.1e (tol %.0e), cutoff gain err %.1e (tol %.3f), octave %d/1000, rms identity err %.1e (tol %.0e)",
             dc_err, kLpfDcTol, cut_err, kLpfCutoffTol, octave_ok, rms_err, kRmsIdentityTol));
}

harness::CorpusSpec vocal_corpus(const std::string& place, std::uint64_t seed) {
  harness::CorpusSpec cs;
  cs.subjects = 10;
  cs.sessions_per_subject = 3;
  cs.songs = 5;
  cs.duration_s = 60;
  cs.place = place;
  cs.seed = seed;
  return cs;
}

// Melody-distance threshold from a held-out corpus of the same place.
double held_out_threshold(const std::string& place, std::uint64_t seed) {
  auto cs = vocal_corpus(place, seed);
  cs.with_audio = false;
  return harness::calibrate_dtw_threshold(harness::generate_corpus(cs)).threshold;
}

void criterion_ablation() {
  const auto t0 = Clock::now();
  const double threshold = held_out_threshold("cafe", 9000);
  VocalConfig full;
  full.dtw_threshold = threshold;
  VocalConfig mapping = full;
  mapping.rank_relaxation = false;
  mapping.correction = false;
  mapping.smoothing = false;

  int improved = 0, ratio_ok = 0;
  double min_gain = 1.0, min_ratio = 1.0, min_full = 1.0, max_map = 0.0;
  std::size_t reaction_filtered = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto corpus = harness::generate_corpus(vocal_corpus("cafe", 500 + seed));
    const auto notes = harness::note_store(corpus);
    const auto a = harness::evaluate_vocal_corpus(corpus, full, notes);
    const auto b = harness::evaluate_vocal_corpus(corpus, mapping, notes);
    const double gain = a.report.macro_f1 - b.report.macro_f1;
    improved += gain > 0.0;
    min_gain = std::min(min_gain, gain);
    min_full = std::min(min_full, a.report.macro_f1);
    max_map = std::max(max_map, b.report.macro_f1);
    min_ratio = std::min(min_ratio, a.report.filtering_ratio);
    ratio_ok += a.report.filtering_ratio >= kMinFilteringRatio && a.reaction_segments_filtered == 0;
    reaction_filtered += a.reaction_segments_filtered;
  }
  const double t = seconds_since(t0);
  report(5, "filtering-ablation", improved == 10 && ratio_ok == 10 && t < kAblationBudgetS,
         fmt("cafe, 10 seeds x 30 sessions, threshold %.1f: full-mapping gain > 0 on %d/10 (min %.3f; full >= %.3f, mapping <= %.3f); "
             "ratio >= %.1f on %d/10 (min %.3f), reaction seconds filtered %zu; %.1f s (budget %.0f s)",
             threshold, improved, min_gain, min_full, max_map, kMinFilteringRatio, ratio_ok, min_ratio,
             reaction_filtered, t, kAblationBudgetS));
}

void criterion_lounge() {
  const auto t0 = Clock::now();
  VocalConfig full;
  full.dtw_threshold = held_out_threshold("lounge", 9100);
  double min_f1 = 1.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto corpus = harness::generate_corpus(vocal_corpus("lounge", 600 + seed));
    const auto r = harness::evaluate_vocal_corpus(corpus, full, harness::note_store(corpus));
    min_f1 = std::min(min_f1, r.report.macro_f1);
  }
  const double t = seconds_since(t0);
  report(6, "vocal-end-to-end", min_f1 >= kLoungeMinF1 && t < kLoungeBudgetS,
         fmt("lounge, 3 seeds x 30 sessions, threshold %.1f: min macro-F1 %.3f (floor %.2f), %.1f s",
             full.dtw_threshold, min_f1, kLoungeMinF1, t));
}

void criterion_smoothing() {
  std::mt19937_64 rng(1007);
  auto other = [&](ReactionLabel l) {
    ReactionLabel x = l;
    while (x == l) x = kVocalLabels[rng() % 3];
    return x;
  };
  // Training data: constant truth runs of 20-40 s, 10% observation flips.
  std::vector<vocal::LabeledSequence> train;
  for (int s = 0; s < 50; ++s) {
    vocal::LabeledSequence q;
    ReactionLabel l = kVocalLabels[rng() % 3];
    while (q.truth.size() < 300) {
      l = other(l);
      q.truth.insert(q.truth.end(), 20 + rng() % 21, l);
    }
    for (auto t : q.truth) q.observed.push_back(rng() % 10 == 0 ? other(t) : t);
    train.push_back(std::move(q));
  }
  const auto hmm = vocal::train_hmm(train);

  // A flip after >= 5 constant seconds fills the 6 s trailing window that
  // decides the flipped second. Flips nearer the run start are reported too.
  int corrected = 0, early_corrected = 0;
  for (int c = 0; c < 1000; ++c) {
    const ReactionLabel l = kVocalLabels[rng() % 3];
    const ReactionLabel before = other(l);
    const std::size_t run = 6 + rng() % 10;
    std::vector<ReactionLabel> obs(6, before);
    const std::size_t start = obs.size();
    obs.insert(obs.end(), run, l);
    obs.insert(obs.end(), 5, other(l));

    auto flipped = obs;
    const std::size_t at = start + 5 + rng() % (run - 5);
    flipped[at] = other(l);
    corrected += vocal::smooth_sequence(flipped, hmm)[at] == l;

    auto early = obs;
    const std::size_t e = start + 1 + rng() % (run - 2);
    early[e] = other(l);
    early_corrected += vocal::smooth_sequence(early, hmm)[e] == l;
  }
  const double rate = corrected / 1000.0;
  report(7, "smoothing-flips", rate >= kMinFlipCorrection,
         fmt("trained HMM self-transition %.3f: %d/1000 flips after >= 5 s of a run corrected (floor %.2f); "
             "flips anywhere inside a run: %d/1000",
             hmm.transition[0][0], corrected, kMinFlipCorrection, early_corrected));
}

void criterion_motion() {
  const auto t0 = Clock::now();
  const motion::HeuristicMotionClassifier clf;
  const MotionConfig config;
  double min_f1 = 1.0, min_ratio = 1.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    harness::CorpusSpec cs;
    cs.kind = harness::CorpusKind::kMotion;
    cs.place = "office";
    cs.subjects = 5;
    cs.sessions_per_subject = 2;
    cs.empty_sessions_per_subject = 1;
    cs.duration_s = 90;
    cs.with_audio = false;
    cs.seed = 700 + seed;
    const auto r = harness::evaluate_motion_corpus(harness::generate_corpus(cs), config, clf);
    min_f1 = std::min(min_f1, r.report.metrics(ReactionLabel::kHeadMotion).f1);
    for (auto act : {harness::Activity::kStill, harness::Activity::kExercise}) {
      auto quiet = cs;
      quiet.activity = act;
      quiet.sessions_per_subject = 0;
      quiet.empty_sessions_per_subject = 2;
      const auto q = harness::evaluate_motion_corpus(harness::generate_corpus(quiet), config, clf);
      min_ratio = std::min(min_ratio, q.report.filtering_ratio);
    }
  }
  const double t = seconds_since(t0);
  report(8, "motion-end-to-end", min_f1 >= kMotionMinF1 && min_ratio >= kActivityMinRatio && t < kMotionBudgetS,
         fmt("office, 3 seeds: min head-motion F1 %.3f (floor %.1f); still/exercise min filtering ratio %.3f (floor %.1f); %.1f s",
             min_f1, kMotionMinF1, min_ratio, kActivityMinRatio, t));
}

std::vector<double> features_of(const harness::EngagementSample& s) {
  const auto v = engage::reaction_features(s.vocal_events, s.motion_events, s.duration_s).to_vector();
  return {v.begin(), v.end()};
}

std::vector<int> pattern_of(const harness::EngagementSample& s) {
  const auto n = static_cast<std::size_t>(std::llround(s.duration_s));
  const auto vocal = expand_events_to_labels(s.vocal_events, n);
  const auto motion = expand_events_to_labels(s.motion_events, n);
  return engage::reaction_index_sequence(vocal, motion);
}

void criterion_engagement() {
  // Recommendation: every pool song queried with its own pattern ranks first.
  const auto pool_samples = harness::generate_engagement_samples(2, 10, 1009);
  std::vector<engage::PoolEntry> pool;
  for (std::size_t i = 0; i < pool_samples.size(); ++i) {
    pool.push_back({fmt("song%02zu", i), pattern_of(pool_samples[i])});
  }
  int self_first = 0;
  for (const auto& e : pool) {
    const auto r = engage::recommend(e.pattern, pool, 3);
    self_first += r.front().song_id == e.song_id && r.front().distance == 0.0;
  }

  double worst_mae = 0.0, worst_f1 = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto samples = harness::generate_engagement_samples(10, 20, 300 + seed);
    std::vector<std::string> subjects;
    std::vector<std::vector<double>> x;
    for (const auto& s : samples) {
      subjects.push_back(s.subject_id);
      x.push_back(features_of(s));
    }
    std::vector<int> pred, truth;
    for (const auto& fold : harness::loso_split(subjects)) {
      std::vector<engage::TrainingSample> train;
      for (auto i : fold.train) train.push_back({x[i], samples[i].rating});
      const auto tree = engage::train_tree(train);
      for (auto i : fold.test) {
        pred.push_back(engage::predict_rating(x[i], tree));
        truth.push_back(samples[i].rating);
      }
    }
    worst_mae = std::max(worst_mae, harness::mean_absolute_error(pred, truth));

    // Familiarity: train on one population, test on unseen subjects.
    std::vector<engage::TrainingSample> fam_train;
    for (std::size_t i = 0; i < samples.size(); ++i) fam_train.push_back({x[i], samples[i].known ? 1 : 0});
    const auto fam_tree = engage::train_tree(fam_train);
    const auto held_out = harness::generate_engagement_samples(5, 20, 400 + seed);
    std::vector<bool> fp, ft;
    for (const auto& s : held_out) {
      fp.push_back(engage::predict_familiarity(features_of(s), fam_tree) == engage::Familiarity::kKnown);
      ft.push_back(s.known);
    }
    worst_f1 = std::min(worst_f1, harness::binary_f1(fp, ft));
  }
  report(9, "engagement-apps",
         self_first == static_cast<int>(pool.size()) && worst_mae <= kMaxRatingMae && worst_f1 >= kMinFamiliarityF1,
         fmt("identical pattern first at distance 0 for %d/%zu songs; rating LOSO max MAE %.3f (ceiling %.1f) over 5 seeds; "
             "familiarity held-out min F1 %.3f (floor %.2f)",
             self_first, pool.size(), worst_mae, kMaxRatingMae, worst_f1, kMinFamiliarityF1));
}

int sh(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// simulate -> train-hmm -> detect -> eval in `dir`; returns the report bytes
// followed by every events file, or an empty string on a failed step.
std::string cli_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string bin = EARREACT_CLI_PATH;
  std::ofstream(dir / "spec.json")
      << R"({"corpus": {"subjects": 3, "sessions_per_subject": 2, "songs": 2, "duration_s": 40, "place": "cafe", "kind": "mixed"}, "seed": 11})";
  std::ofstream(dir / "config.json") << R"({"vocal": {"dtw_threshold": 38}})";
  const std::string d = dir.string();
  const std::string quiet = " 2>> " + d + "/log.txt";
  if (sh(bin + " simulate --spec " + d + "/spec.json --out " + d + "/corpus" + quiet) != 0) return {};
  if (sh(bin + " train-hmm --data " + d + "/corpus --config " + d + "/config.json --out " + d + "/hmm.json" + quiet) != 0) return {};
  if (sh(bin + " detect --pipeline both --corpus " + d + "/corpus --config " + d + "/config.json --hmm " + d +
         "/hmm.json --workers 2 --out " + d + "/pred" + quiet) != 0) {
    return {};
  }
  if (sh(bin + " eval --pred " + d + "/pred --truth " + d + "/corpus --report " + d + "/report.json" + quiet) != 0) return {};
  std::string bytes = slurp(dir / "report.json");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir / "pred")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) bytes += f.filename().string() + "\n" + slurp(f);
  return bytes;
}

void criterion_determinism() {
  const auto t0 = Clock::now();
  const auto base = fs::temp_directory_path() / "earreact_acceptance_cli";
  const auto a = cli_pipeline(base / "run1");
  const auto b = cli_pipeline(base / "run2");
  const bool ok = !a.empty() && a == b;
  report(10, "cli-determinism", ok,
         fmt("simulate->train-hmm->detect->eval twice: %s (%zu bytes compared), %.1f s",
             a.empty() ? "pipeline failed" : (a == b ? "byte-identical" : "outputs differ"), a.size(),
             seconds_since(t0)));
  if (ok) fs::remove_all(base);
}

}  // namespace

int main() {
  criterion_dtw();
  criterion_viterbi();
  criterion_shapes();
  criterion_numerics();
  criterion_ablation();
  criterion_lounge();
  criterion_smoothing();
  criterion_motion();
  criterion_engagement();
  criterion_determinism();
  std::printf("%d criteria failed\n", failures);
  return failures;
}
