#include "earreact/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "earreact/dsp/dtw.hpp"
#include "earreact/harness/loso.hpp"
#include "earreact/motion/pipeline.hpp"
#include "earreact/vocal/correction.hpp"

namespace earreact::harness {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

vocal::VocalResult run_vocal_session(const SyntheticSession& s, const VocalConfig& config,
                                     const musicinfo::MusicInfoStore* notes,
                                     const vocal::HmmParams* hmm) {
  std::map<std::size_t, vocal::ScoreVector> scores;
  for (const auto& r : s.scores) scores.insert_or_assign(r.index, vocal::ScoreVector(r.classes, r.scores));
  const vocal::ScorePlaybackClassifier classifier(std::move(scores));
  const vocal::PitchPlayback tracker(s.pitch);
  const vocal::VocalPipeline pipeline(config, classifier, tracker, notes, hmm);
  return pipeline.run(s.session);
}

namespace {

void add_stats(FilteringStats& total, const FilteringStats& s) {
  total.total_segments += s.total_segments;
  total.motion_filtered += s.motion_filtered;
  total.sound_filtered += s.sound_filtered;
  total.classified += s.classified;
}

std::vector<std::string> subjects_of(const std::vector<SyntheticSession>& corpus) {
  std::vector<std::string> out;
  for (const auto& s : corpus) out.push_back(s.session.subject_id);
  return out;
}

// Pooled report plus the mean of per-subject macro-F1.
EvalReport pooled_report(const std::vector<SyntheticSession>& corpus,
                         const std::vector<std::vector<ReactionLabel>>& labels,
                         const std::vector<std::vector<ReactionLabel>>& truth,
                         const FilteringStats& stats) {
  std::vector<ReactionLabel> all_pred;
  std::vector<ReactionLabel> all_truth;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    all_pred.insert(all_pred.end(), labels[i].begin(), labels[i].end());
    all_truth.insert(all_truth.end(), truth[i].begin(), truth[i].end());
  }
  EvalReport report = evaluate(all_pred, all_truth, stats);
  const auto subjects = subjects_of(corpus);
  if (std::set<std::string>(subjects.begin(), subjects.end()).size() >= 2) {
    double sum = 0.0;
    const auto folds = loso_split(subjects);
    for (const auto& fold : folds) {
      std::vector<ReactionLabel> p;
      std::vector<ReactionLabel> t;
      for (auto i : fold.test) {
        p.insert(p.end(), labels[i].begin(), labels[i].end());
        t.insert(t.end(), truth[i].begin(), truth[i].end());
      }
      sum += evaluate(p, t).macro_f1;
    }
    report.fold_mean_macro_f1 = sum / static_cast<double>(folds.size());
  }
  return report;
}

std::vector<vocal::VocalResult> run_unsmoothed(const std::vector<SyntheticSession>& corpus,
                                               VocalConfig config,
                                               const musicinfo::MusicInfoStore& notes,
                                               std::size_t workers) {
  config.smoothing = false;
  std::vector<vocal::VocalResult> results(corpus.size());
  parallel_for(corpus.size(), workers, [&](std::size_t i) {
    results[i] = run_vocal_session(corpus[i], config, &notes, nullptr);
  });
  return results;
}

}  // namespace

CorpusEvaluation evaluate_vocal_corpus(const std::vector<SyntheticSession>& corpus,
                                       const VocalConfig& config,
                                       const musicinfo::MusicInfoStore& notes,
                                       std::size_t workers) {
  const auto results = run_unsmoothed(corpus, config, notes, workers);
  CorpusEvaluation ev;
  std::vector<std::vector<ReactionLabel>> truth;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    truth.push_back(vocal_truth(corpus[i].truth));
    ev.labels.push_back(results[i].labels);
    add_stats(ev.stats, results[i].stats);
    for (std::size_t k = 0; k < truth[i].size(); ++k) {
      const auto stage = results[i].stages[k];
      if (is_reaction(truth[i][k]) &&
          (stage == vocal::VocalStage::kMotionFilter || stage == vocal::VocalStage::kSoundFilter)) {
        ++ev.reaction_segments_filtered;
      }
    }
  }
  if (config.smoothing) {
    for (const auto& fold : loso_split(subjects_of(corpus))) {
      std::vector<vocal::LabeledSequence> train;
      for (auto i : fold.train) train.push_back({results[i].raw_labels, truth[i]});
      const auto hmm = vocal::train_hmm(train);
      for (auto i : fold.test) {
        ev.labels[i] = vocal::smooth_sequence(results[i].raw_labels, hmm, config.smoothing_window);
      }
    }
  }
  ev.report = pooled_report(corpus, ev.labels, truth, ev.stats);
  return ev;
}

CorpusEvaluation evaluate_motion_corpus(const std::vector<SyntheticSession>& corpus,
                                        const MotionConfig& config,
                                        const motion::SequenceClassifier& classifier,
                                        std::size_t workers) {
  std::vector<motion::MotionResult> results(corpus.size());
  const motion::MotionPipeline pipeline(config, classifier);
  parallel_for(corpus.size(), workers,
               [&](std::size_t i) { results[i] = pipeline.run(corpus[i].session); });
  CorpusEvaluation ev;
  std::vector<std::vector<ReactionLabel>> truth;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    truth.push_back(motion_truth(corpus[i].truth));
    ev.labels.push_back(results[i].labels);
    add_stats(ev.stats, results[i].stats);
  }
  ev.report = pooled_report(corpus, ev.labels, truth, ev.stats);
  return ev;
}

vocal::HmmParams train_hmm_on_corpus(const std::vector<SyntheticSession>& corpus,
                                     const VocalConfig& config,
                                     const musicinfo::MusicInfoStore& notes,
                                     std::size_t workers) {
  const auto results = run_unsmoothed(corpus, config, notes, workers);
  std::vector<vocal::LabeledSequence> train;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    train.push_back({results[i].raw_labels, vocal_truth(corpus[i].truth)});
  }
  return vocal::train_hmm(train);
}

DtwCalibration calibrate_dtw_threshold(const std::vector<SyntheticSession>& corpus,
                                       double reference_margin_s) {
  DtwCalibration cal;
  for (const auto& s : corpus) {
    const std::size_t seconds = s.truth.size();
    for (std::size_t k = 0; k < seconds; ++k) {
      const auto first = s.pitch.begin() + static_cast<long>(k * 10);
      const std::vector<vocal::PitchEstimate> hops(first, first + 10);
      const auto observed = vocal::chroma_from_pitch(hops);
      const double t0 = s.session.start_offset_in_song + static_cast<double>(k);
      const auto reference = musicinfo::note_window(s.notes, t0, t0 + 1.0, reference_margin_s);
      const double d = dsp::dtw_distance(observed, reference);
      const auto truth = s.truth[k];
      if (truth == ReactionLabel::kSingingHumming || truth == ReactionLabel::kWhistling) {
        cal.reaction_distances.push_back(d);
      } else if (truth == ReactionLabel::kNonReaction) {
        cal.non_reaction_distances.push_back(d);
      }
    }
  }
  auto pos = cal.reaction_distances;
  auto neg = cal.non_reaction_distances;
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> candidates(pos.begin(), pos.end());
  candidates.insert(candidates.end(), neg.begin(), neg.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  double best_score = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    // Threshold t accepts d <= t.
    const double t = candidates[i];
    const double tpr = pos.empty() ? 1.0
                                   : static_cast<double>(std::upper_bound(pos.begin(), pos.end(), t) - pos.begin()) /
                                         static_cast<double>(pos.size());
    const double tnr = neg.empty() ? 1.0
                                   : static_cast<double>(neg.end() - std::upper_bound(neg.begin(), neg.end(), t)) /
                                         static_cast<double>(neg.size());
    const double score = tpr + tnr;
    if (score > best_score) {
      best_score = score;
      cal.threshold = i + 1 < candidates.size() ? (t + candidates[i + 1]) / 2.0 : t;
    }
  }
  return cal;
}

}  // namespace earreact::harness
