#pragma once

#include <functional>
#include <vector>

#include "earreact/core/config.hpp"
#include "earreact/harness/metrics.hpp"
#include "earreact/harness/synth.hpp"
#include "earreact/motion/classifier.hpp"
#include "earreact/vocal/pipeline.hpp"

namespace earreact::harness {

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0: hardware
/// concurrency). The first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Vocal pipeline over a synthetic session with its oracle scores and pitch
/// playback.
vocal::VocalResult run_vocal_session(const SyntheticSession& s, const VocalConfig& config,
                                     const musicinfo::MusicInfoStore* notes,
                                     const vocal::HmmParams* hmm);

struct CorpusEvaluation {
  /// Pooled over every session; fold_mean_macro_f1 holds the per-subject mean.
  EvalReport report;
  FilteringStats stats;
  /// Ground-truth reaction seconds decided by a prefilter.
  std::size_t reaction_segments_filtered = 0;
  std::vector<std::vector<ReactionLabel>> labels;  // per session
};

/// Runs the vocal pipeline on every session. With smoothing enabled, each
/// subject's sessions are smoothed by an HMM trained on the other subjects'
/// unsmoothed outputs (leave-one-subject-out).
CorpusEvaluation evaluate_vocal_corpus(const std::vector<SyntheticSession>& corpus,
                                       const VocalConfig& config,
                                       const musicinfo::MusicInfoStore& notes,
                                       std::size_t workers = 0);

CorpusEvaluation evaluate_motion_corpus(const std::vector<SyntheticSession>& corpus,
                                        const MotionConfig& config,
                                        const motion::SequenceClassifier& classifier,
                                        std::size_t workers = 0);

/// HMM trained on the unsmoothed vocal outputs of a corpus against its truth.
vocal::HmmParams train_hmm_on_corpus(const std::vector<SyntheticSession>& corpus,
                                     const VocalConfig& config,
                                     const musicinfo::MusicInfoStore& notes,
                                     std::size_t workers = 0);

struct DtwCalibration {
  double threshold = 0.0;
  std::vector<double> reaction_distances;      // truth singing/whistling seconds
  std::vector<double> non_reaction_distances;  // truth non_reaction seconds
};

/// Melody distances of every second against its reference window, split by
/// truth, and the threshold maximizing balanced accuracy (midpoint between
/// the two neighbouring distances).
DtwCalibration calibrate_dtw_threshold(const std::vector<SyntheticSession>& corpus,
                                       double reference_margin_s = 0.5);

}  // namespace earreact::harness
