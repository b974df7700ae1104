#include "earreact/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "earreact/core/config.hpp"
#include "earreact/core/errors.hpp"
#include "earreact/core/events.hpp"
#include "earreact/core/session_io.hpp"
#include "earreact/engage/features.hpp"
#include "earreact/engage/recommend.hpp"
#include "earreact/engage/tree.hpp"
#include "earreact/harness/experiment.hpp"
#include "earreact/harness/loso.hpp"
#include "earreact/harness/metrics.hpp"
#include "earreact/harness/synth.hpp"
#include "earreact/motion/heuristic.hpp"
#include "earreact/motion/lstm.hpp"
#include "earreact/motion/pipeline.hpp"
#include "earreact/vocal/pipeline.hpp"
#include "json.hpp"

namespace earreact::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

PipelineConfig resolve_config(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr) path = env;
  }
  return path.empty() ? PipelineConfig{} : load_config(path);
}

bool is_session_dir(const fs::path& dir) { return fs::is_regular_file(dir / "meta.json"); }

std::vector<fs::path> session_dirs(const fs::path& root) {
  if (is_session_dir(root)) return {root};
  if (!fs::is_directory(root)) throw ConfigError("not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && is_session_dir(entry.path())) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw ConfigError("no session directories under " + root.string());
  return dirs;
}

// Note tracks: the flag, else <dir>/notes, else the parent's notes.
musicinfo::MusicInfoStore load_notes(const std::string& flag, const fs::path& dir) {
  if (!flag.empty()) return musicinfo::MusicInfoStore::load_directory(flag);
  for (const auto& candidate : {dir / "notes", dir.parent_path() / "notes"}) {
    if (fs::is_directory(candidate)) return musicinfo::MusicInfoStore::load_directory(candidate);
  }
  return {};
}

// ---- detect ---------------------------------------------------------------

struct DetectOptions {
  std::string pipeline = "both";
  std::string session;
  std::string corpus;
  std::string config;
  std::string out;
  std::string notes;
  std::string hmm;
  std::string lstm;
  std::string stats;
  std::string labels_out;
  std::string pitch_tracker = "auto";
  std::size_t workers = 1;
};

struct DetectOutput {
  std::vector<EventRecord> events;
  std::string stats_json;
  std::vector<ReactionLabel> vocal_labels;
  std::vector<ReactionLabel> motion_labels;
  std::vector<std::string> diagnostics;
};

class Detector {
 public:
  Detector(const DetectOptions& opt, const fs::path& notes_root)
      : opt_(opt), config_(resolve_config(opt.config)) {
    config_.validate();
    run_vocal_ = opt.pipeline != "motion";
    run_motion_ = opt.pipeline != "vocal";
    if (run_vocal_) {
      notes_ = load_notes(opt.notes, notes_root);
      if (config_.vocal.smoothing) {
        if (opt.hmm.empty()) throw ConfigError("smoothing is enabled but no --hmm file was given");
        hmm_ = vocal::load_hmm(opt.hmm);
      }
    }
    if (run_motion_) {
      if (opt.lstm.empty()) {
        classifier_ = std::make_unique<motion::HeuristicMotionClassifier>(config_.motion.heuristic);
      } else {
        classifier_ = std::make_unique<motion::LstmClassifier>(motion::load_lstm_weights(opt.lstm));
      }
    }
  }

  DetectOutput run(const fs::path& dir) const {
    const Session session = load_session(dir);
    DetectOutput out;
    json stats = json::object();
    if (run_vocal_) {
      const auto classifier = vocal::ScorePlaybackClassifier::load(dir / "scores.jsonl");
      std::unique_ptr<vocal::PitchTracker> tracker;
      const bool playback = opt_.pitch_tracker == "playback" ||
                            (opt_.pitch_tracker == "auto" && fs::exists(dir / "pitch.csv"));
      if (playback) {
        tracker = std::make_unique<vocal::PitchPlayback>(vocal::PitchPlayback::load(dir / "pitch.csv"));
      } else {
        tracker = std::make_unique<vocal::AutocorrelationPitchTracker>(
            config_.vocal.pitch_min_hz, config_.vocal.pitch_max_hz, config_.vocal.pitch_hop_s);
      }
      const vocal::VocalPipeline pipeline(config_.vocal, classifier, *tracker,
                                          config_.vocal.correction ? &notes_ : nullptr,
                                          hmm_ ? &*hmm_ : nullptr);
      const auto result = pipeline.run(session);
      const auto tagged = tag_events(result.events, "vocal");
      out.events.insert(out.events.end(), tagged.begin(), tagged.end());
      out.vocal_labels = result.labels;
      stats["vocal"] = json::parse(stats_to_json(result.stats));
      for (const auto& d : result.diagnostics) out.diagnostics.push_back(session.id + ": " + d);
    }
    if (run_motion_) {
      const motion::MotionPipeline pipeline(config_.motion, *classifier_);
      const auto result = pipeline.run(session);
      const auto tagged = tag_events(result.events, "motion");
      out.events.insert(out.events.end(), tagged.begin(), tagged.end());
      out.motion_labels = result.labels;
      stats["motion"] = json::parse(stats_to_json(result.stats));
      for (const auto& d : result.diagnostics) out.diagnostics.push_back(session.id + ": " + d);
    }
    out.stats_json = (stats.size() == 1 ? stats.begin().value() : stats).dump(2) + "\n";
    return out;
  }

 private:
  const DetectOptions& opt_;
  PipelineConfig config_;
  bool run_vocal_ = false;
  bool run_motion_ = false;
  musicinfo::MusicInfoStore notes_;
  std::optional<vocal::HmmParams> hmm_;
  std::unique_ptr<motion::SequenceClassifier> classifier_;
};

std::string events_text(const std::vector<EventRecord>& events) {
  std::ostringstream s;
  write_events_jsonl(s, events);
  return s.str();
}

std::string labels_text(const DetectOutput& d) {
  std::ostringstream s;
  const bool v = !d.vocal_labels.empty();
  const bool m = !d.motion_labels.empty();
  s << "second" << (v ? ",vocal" : "") << (m ? ",motion" : "") << '\n';
  const std::size_t n = std::max(d.vocal_labels.size(), d.motion_labels.size());
  for (std::size_t k = 0; k < n; ++k) {
    s << k;
    if (v) s << ',' << to_string(d.vocal_labels[k]);
    if (m) s << ',' << to_string(d.motion_labels[k]);
    s << '\n';
  }
  return s.str();
}

int cmd_detect(const DetectOptions& opt, std::ostream& err) {
  if (opt.session.empty() == opt.corpus.empty()) {
    throw CLI::ValidationError("detect", "exactly one of --session or --corpus is required");
  }
  if (!opt.session.empty()) {
    const fs::path dir = opt.session;
    const Detector detector(opt, dir);
    const auto out = detector.run(dir);
    for (const auto& d : out.diagnostics) err << "earreact: " << d << '\n';
    write_text(opt.out, events_text(out.events));
    if (!opt.stats.empty()) write_text(opt.stats, out.stats_json);
    if (!opt.labels_out.empty()) write_text(opt.labels_out, labels_text(out));
    return kExitOk;
  }
  const fs::path root = opt.corpus;
  const auto dirs = session_dirs(root);
  const Detector detector(opt, root);
  std::vector<DetectOutput> outputs(dirs.size());
  harness::parallel_for(dirs.size(), opt.workers, [&](std::size_t i) { outputs[i] = detector.run(dirs[i]); });
  const fs::path out_dir = opt.out;
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (const auto& d : outputs[i].diagnostics) err << "earreact: " << d << '\n';
    const std::string id = dirs[i].filename().string();
    write_text(out_dir / (id + ".events.jsonl"), events_text(outputs[i].events));
    write_text(out_dir / (id + ".stats.json"), outputs[i].stats_json);
    if (!opt.labels_out.empty()) {
      write_text(out_dir / (id + ".labels.csv"), labels_text(outputs[i]));
    }
  }
  err << "earreact: detected " << dirs.size() << " sessions\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

enum class Domain { kVocal, kMotion, kBoth };

bool is_motion_record(const EventRecord& r) {
  return r.source == "motion" || (r.source.empty() && r.event.label == ReactionLabel::kHeadMotion);
}

Domain infer_domain(const std::vector<EventRecord>& pred, const std::string& flag) {
  if (flag == "vocal") return Domain::kVocal;
  if (flag == "motion") return Domain::kMotion;
  if (flag == "both") return Domain::kBoth;
  bool vocal = false;
  bool motion = false;
  for (const auto& r : pred) (is_motion_record(r) ? motion : vocal) = true;
  if (vocal && motion) return Domain::kBoth;
  return motion ? Domain::kMotion : Domain::kVocal;
}

std::size_t timeline_seconds(const std::vector<EventRecord>& pred) {
  double end = 0.0;
  for (const auto& r : pred) end = std::max(end, r.event.t_end);
  return static_cast<std::size_t>(std::llround(end));
}

// Per-second labels of one domain. Both: vocal reactions win over motion.
std::vector<ReactionLabel> predicted_labels(const std::vector<EventRecord>& pred, Domain domain,
                                            std::size_t n) {
  std::vector<ReactionEvent> vocal;
  std::vector<ReactionEvent> motion;
  for (const auto& r : pred) (is_motion_record(r) ? motion : vocal).push_back(r.event);
  const auto v = expand_events_to_labels(vocal, n);
  const auto m = expand_events_to_labels(motion, n);
  if (domain == Domain::kVocal) return v;
  if (domain == Domain::kMotion) return m;
  std::vector<ReactionLabel> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = is_reaction(v[k]) ? v[k] : m[k];
  return out;
}

std::vector<ReactionLabel> truth_labels(const std::vector<ReactionEvent>& spans, Domain domain,
                                        std::size_t n) {
  for (const auto& s : spans) {
    if (s.t_end > static_cast<double>(n) + 0.5) {
      throw ParameterError("truth spans extend past the predicted timeline");
    }
  }
  auto truth = expand_events_to_labels(spans, n);
  if (domain == Domain::kVocal) return harness::vocal_truth(truth);
  if (domain == Domain::kMotion) return harness::motion_truth(truth);
  return truth;
}

FilteringStats stats_for(const std::string& text, Domain domain) {
  const json j = json::parse(text);
  if (j.contains("total_segments")) return stats_from_json(text);
  const char* key = domain == Domain::kMotion ? "motion" : "vocal";
  if (!j.contains(key)) throw ParseError(std::string("stats file lacks a ") + key + " section");
  return stats_from_json(j.at(key).dump());
}

struct EvalOptions {
  std::string pred;
  std::string truth;
  std::string report;
  std::string stats;
  std::string pipeline;
};

int cmd_eval(const EvalOptions& opt, std::ostream& err) {
  const fs::path pred_path = opt.pred;
  if (!fs::is_directory(pred_path)) {
    const auto pred = read_events_jsonl(pred_path);
    if (pred.empty()) throw ParameterError("prediction file has no events");
    const Domain domain = infer_domain(pred, opt.pipeline);
    const std::size_t n = timeline_seconds(pred);
    const auto predicted = predicted_labels(pred, domain, n);
    const auto truth = truth_labels(read_label_spans_csv(fs::path(opt.truth)), domain, n);
    FilteringStats stats;
    if (!opt.stats.empty()) stats = stats_for(read_text(opt.stats), domain);
    const auto report = harness::evaluate(predicted, truth, stats);
    write_text(opt.report, harness::report_to_json(report) + "\n");
    err << "earreact: macro_f1 " << report.macro_f1 << " over " << n << " s\n";
    return kExitOk;
  }

  // Corpus: <pred>/<id>.events.jsonl against <truth>/<id>/labels.csv.
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(pred_path)) {
    const auto name = entry.path().filename().string();
    const std::string suffix = ".events.jsonl";
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      ids.push_back(name.substr(0, name.size() - suffix.size()));
    }
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw ConfigError("no *.events.jsonl files in " + pred_path.string());
  std::vector<ReactionLabel> all_pred;
  std::vector<ReactionLabel> all_truth;
  std::map<std::string, std::pair<std::vector<ReactionLabel>, std::vector<ReactionLabel>>> by_subject;
  FilteringStats total;
  std::optional<Domain> domain;
  for (const auto& id : ids) {
    const auto pred = read_events_jsonl(pred_path / (id + ".events.jsonl"));
    if (pred.empty()) throw ParameterError(id + ": prediction file has no events");
    if (!domain) domain = infer_domain(pred, opt.pipeline);
    const fs::path session_dir = fs::path(opt.truth) / id;
    const std::size_t n = timeline_seconds(pred);
    const auto p = predicted_labels(pred, *domain, n);
    const auto t = truth_labels(read_label_spans_csv(session_dir / "labels.csv"), *domain, n);
    all_pred.insert(all_pred.end(), p.begin(), p.end());
    all_truth.insert(all_truth.end(), t.begin(), t.end());
    const auto meta = json::parse(read_text(session_dir / "meta.json"));
    auto& bucket = by_subject[meta.at("subject_id").get<std::string>()];
    bucket.first.insert(bucket.first.end(), p.begin(), p.end());
    bucket.second.insert(bucket.second.end(), t.begin(), t.end());
    const fs::path stats_path = pred_path / (id + ".stats.json");
    if (fs::exists(stats_path)) {
      const auto s = stats_for(read_text(stats_path), *domain);
      total.total_segments += s.total_segments;
      total.motion_filtered += s.motion_filtered;
      total.sound_filtered += s.sound_filtered;
      total.classified += s.classified;
    }
  }
  auto report = harness::evaluate(all_pred, all_truth, total);
  double sum = 0.0;
  for (const auto& [subject, pt] : by_subject) sum += harness::evaluate(pt.first, pt.second).macro_f1;
  report.fold_mean_macro_f1 = sum / static_cast<double>(by_subject.size());
  write_text(opt.report, harness::report_to_json(report) + "\n");
  err << "earreact: macro_f1 " << report.macro_f1 << " over " << ids.size() << " sessions\n";
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateOptions {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out;
};

json events_json(const std::vector<ReactionEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    arr.push_back({{"label", std::string(to_string(e.label))}, {"t_start", e.t_start}, {"t_end", e.t_end}});
  }
  return arr;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& err) {
  const std::string text = read_text(opt.spec);
  const fs::path out = opt.out;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid spec JSON: ") + e.what());
  }
  if (root.contains("engagement")) {
    const auto& e = root.at("engagement");
    const auto seed = opt.seed.value_or(root.value("seed", std::uint64_t{0}));
    const auto samples = harness::generate_engagement_samples(
        e.value("subjects", std::size_t{10}), e.value("per_subject", std::size_t{20}), seed);
    std::ostringstream s;
    for (const auto& sample : samples) {
      json j;
      j["subject_id"] = sample.subject_id;
      j["song_id"] = sample.song_id;
      j["duration_s"] = sample.duration_s;
      j["vocal_events"] = events_json(sample.vocal_events);
      j["motion_events"] = events_json(sample.motion_events);
      j["rating"] = sample.rating;
      j["known"] = sample.known;
      s << j.dump() << '\n';
    }
    write_text(out / "samples.jsonl", s.str());
    err << "earreact: wrote " << samples.size() << " engagement samples\n";
    return kExitOk;
  }
  if (harness::is_corpus_spec(text)) {
    auto spec = harness::corpus_spec_from_json(text);
    if (opt.seed) spec.seed = *opt.seed;
    const auto corpus = harness::generate_corpus(spec);
    for (const auto& s : corpus) harness::write_session_dir(out / s.session.id, s, out / "notes");
    err << "earreact: wrote " << corpus.size() << " sessions\n";
    return kExitOk;
  }
  auto spec = harness::synthetic_spec_from_json(text);
  if (opt.seed) spec.seed = *opt.seed;
  const auto session = harness::generate_session(spec, spec.seed);
  harness::write_session_dir(out, session, out / "notes");
  err << "earreact: wrote session " << spec.session_id << '\n';
  return kExitOk;
}

// ---- train-hmm ------------------------------------------------------------

struct TrainHmmOptions {
  std::string data;
  std::string config;
  std::string notes;
  std::string out;
  std::size_t workers = 1;
};

int cmd_train_hmm(const TrainHmmOptions& opt, std::ostream& err) {
  const fs::path root = opt.data;
  const auto dirs = session_dirs(root);
  auto config = resolve_config(opt.config);
  config.validate();
  config.vocal.smoothing = false;
  const auto notes = load_notes(opt.notes, root);
  std::vector<vocal::LabeledSequence> sequences(dirs.size());
  harness::parallel_for(dirs.size(), opt.workers, [&](std::size_t i) {
    const Session session = load_session(dirs[i]);
    const auto classifier = vocal::ScorePlaybackClassifier::load(dirs[i] / "scores.jsonl");
    const auto tracker = vocal::PitchPlayback::load(dirs[i] / "pitch.csv");
    const vocal::VocalPipeline pipeline(config.vocal, classifier, tracker,
                                        config.vocal.correction ? &notes : nullptr, nullptr);
    auto result = pipeline.run(session);
    const auto spans = read_label_spans_csv(dirs[i] / "labels.csv");
    sequences[i] = {std::move(result.raw_labels),
                    harness::vocal_truth(expand_events_to_labels(spans, result.labels.size()))};
  });
  const auto hmm = vocal::train_hmm(sequences);
  vocal::save_hmm(opt.out, hmm);
  err << "earreact: trained HMM on " << dirs.size() << " sessions\n";
  return kExitOk;
}

// ---- train-tree -----------------------------------------------------------

struct TrainTreeOptions {
  std::string task;
  std::string data;
  std::string out;
  int max_depth = 4;
  int min_leaf = 2;
};

std::vector<ReactionEvent> events_from_json(const json& arr) {
  std::vector<ReactionEvent> out;
  for (const auto& e : arr) {
    out.push_back({label_from_string(e.at("label").get<std::string>()), e.at("t_start").get<double>(),
                   e.at("t_end").get<double>()});
  }
  return out;
}

int cmd_train_tree(const TrainTreeOptions& opt, std::ostream& err) {
  std::ifstream in(opt.data);
  if (!in) throw ConfigError("cannot open " + opt.data);
  std::vector<engage::TrainingSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const auto features = engage::reaction_features(events_from_json(j.at("vocal_events")),
                                                      events_from_json(j.at("motion_events")),
                                                      j.at("duration_s").get<double>());
      const auto v = features.to_vector();
      engage::TrainingSample s;
      s.features.assign(v.begin(), v.end());
      s.target = opt.task == "rating" ? j.at("rating").get<int>() : (j.at("known").get<bool>() ? 1 : 0);
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(opt.data + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  const auto tree = engage::train_tree(samples, opt.max_depth, opt.min_leaf);
  engage::save_tree(opt.out, tree, opt.task);
  err << "earreact: trained " << opt.task << " tree on " << samples.size() << " samples, depth "
      << tree.depth() << '\n';
  return kExitOk;
}

// ---- recommend ------------------------------------------------------------

std::vector<int> pattern_from_events(const std::vector<EventRecord>& records) {
  std::size_t n = timeline_seconds(records);
  if (n == 0) throw ParameterError("reaction pattern is empty");
  std::vector<ReactionEvent> vocal;
  std::vector<ReactionEvent> motion;
  for (const auto& r : records) (is_motion_record(r) ? motion : vocal).push_back(r.event);
  return engage::reaction_index_sequence(expand_events_to_labels(vocal, n),
                                         expand_events_to_labels(motion, n));
}

struct RecommendOptions {
  std::string pattern;
  std::string pool;
  std::size_t top = 5;
  std::string out;
};

int cmd_recommend(const RecommendOptions& opt, std::ostream& err) {
  const auto pattern = pattern_from_events(read_events_jsonl(fs::path(opt.pattern)));
  std::vector<engage::PoolEntry> pool;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.pool)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    pool.push_back({f.stem().string(), pattern_from_events(read_events_jsonl(f))});
  }
  const auto ranked = engage::recommend(pattern, pool, opt.top);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : ranked) j.push_back({{"song_id", r.song_id}, {"distance", r.distance}});
  write_text(opt.out, j.dump(2) + "\n");
  err << "earreact: ranked " << pool.size() << " songs\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Music listening reaction detection from earbud IMU and audio"};
  app.name(args.empty() ? "earreact" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.allow_extras(false);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic labeled sessions");
  simulate->add_option("--spec", sim.spec, "Session, corpus or engagement spec (JSON)")->required();
  simulate->add_option("--seed", sim.seed, "Seed overriding the spec");
  simulate->add_option("--out", sim.out, "Output directory")->required();

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "Detect reactions in a session or corpus");
  detect->add_option("--pipeline", det.pipeline, "vocal, motion or both")
      ->check(CLI::IsMember({"vocal", "motion", "both"}));
  auto* session_opt = detect->add_option("--session", det.session, "Session directory");
  auto* corpus_opt = detect->add_option("--corpus", det.corpus, "Directory of session directories");
  session_opt->excludes(corpus_opt);
  detect->add_option("--config", det.config, "Config file (default: $EARREACT_CONFIG)");
  detect->add_option("--out", det.out, "Events file, or output directory with --corpus")->required();
  detect->add_option("--notes", det.notes, "Note track directory");
  detect->add_option("--hmm", det.hmm, "HMM parameters for smoothing");
  detect->add_option("--lstm", det.lstm, "LSTM weights (default: heuristic motion classifier)");
  detect->add_option("--stats", det.stats, "Filtering statistics output");
  detect->add_option("--labels-out", det.labels_out, "Per-second labels output");
  detect->add_option("--pitch-tracker", det.pitch_tracker, "auto, playback or autocorr")
      ->check(CLI::IsMember({"auto", "playback", "autocorr"}));
  detect->add_option("--workers", det.workers, "Sessions processed in parallel")
      ->check(CLI::PositiveNumber);

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--pred", ev.pred, "Events file, or detect output directory")->required();
  eval->add_option("--truth", ev.truth, "labels.csv, or corpus directory")->required();
  eval->add_option("--report", ev.report, "report.json output")->required();
  eval->add_option("--stats", ev.stats, "Filtering statistics from detect");
  eval->add_option("--pipeline", ev.pipeline, "vocal, motion or both (default: inferred)")
      ->check(CLI::IsMember({"vocal", "motion", "both"}));

  TrainHmmOptions th;
  auto* train_hmm = app.add_subcommand("train-hmm", "Train the smoothing HMM on labeled sessions");
  train_hmm->add_option("--data", th.data, "Session or corpus directory")->required();
  train_hmm->add_option("--config", th.config, "Config file (default: $EARREACT_CONFIG)");
  train_hmm->add_option("--notes", th.notes, "Note track directory");
  train_hmm->add_option("--out", th.out, "HMM output file")->required();
  train_hmm->add_option("--workers", th.workers, "Sessions processed in parallel")
      ->check(CLI::PositiveNumber);

  TrainTreeOptions tt;
  auto* train_tree = app.add_subcommand("train-tree", "Train a rating or familiarity tree");
  train_tree->add_option("--task", tt.task, "rating or familiarity")
      ->required()
      ->check(CLI::IsMember({"rating", "familiarity"}));
  train_tree->add_option("--data", tt.data, "Engagement samples (JSON lines)")->required();
  train_tree->add_option("--out", tt.out, "Tree output file")->required();
  train_tree->add_option("--max-depth", tt.max_depth, "Maximum depth")->check(CLI::NonNegativeNumber);
  train_tree->add_option("--min-leaf", tt.min_leaf, "Minimum samples per leaf")->check(CLI::PositiveNumber);

  RecommendOptions rec;
  auto* recommend = app.add_subcommand("recommend", "Rank songs by reaction-pattern similarity");
  recommend->add_option("--pattern", rec.pattern, "Events of the listening session")->required();
  recommend->add_option("--pool", rec.pool, "Directory of <song_id>.jsonl event files")->required();
  recommend->add_option("--top", rec.top, "Number of songs returned")->check(CLI::PositiveNumber);
  recommend->add_option("--out", rec.out, "Ranking output (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "earreact: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, err);
    if (detect->parsed()) return cmd_detect(det, err);
    if (eval->parsed()) return cmd_eval(ev, err);
    if (train_hmm->parsed()) return cmd_train_hmm(th, err);
    if (train_tree->parsed()) return cmd_train_tree(tt, err);
    if (recommend->parsed()) return cmd_recommend(rec, err);
  } catch (const CLI::ValidationError& e) {
    err << "earreact: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "earreact: error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace earreact::cli
