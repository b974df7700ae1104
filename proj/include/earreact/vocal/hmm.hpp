#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "earreact/core/labels.hpp"

namespace earreact::vocal {

inline constexpr std::size_t kHmmStates = 3;  // non_reaction, singing_humming, whistling

using HmmRow = std::array<double, kHmmStates>;
using HmmMatrix = std::array<HmmRow, kHmmStates>;

/// Discrete HMM over the vocal labels; hidden states and observations share
/// the alphabet in kVocalLabels order.
struct HmmParams {
  HmmRow initial{};
  HmmMatrix transition{};  // transition[from][to]
  HmmMatrix emission{};    // emission[state][observation]

  /// Throws ParameterError unless every row sums to 1 within 1e-9 and all
  /// entries are strictly positive.
  void validate() const;
};

/// An observed label sequence paired with its ground truth.
struct LabeledSequence {
  std::vector<ReactionLabel> observed;
  std::vector<ReactionLabel> truth;
};

/// Counts-based estimate with add-`laplace` smoothing on every row.
/// Initial probabilities are the marginal frequencies of true labels, since
/// smoothing windows start anywhere in a session. Throws ParameterError on
/// empty input, mismatched lengths or non-vocal labels.
HmmParams train_hmm(std::span<const LabeledSequence> sequences, double laplace = 1.0);

struct ViterbiResult {
  std::vector<ReactionLabel> path;
  double log_prob = 0.0;
};

/// Most probable hidden path, log domain. Ties go to the lower state index;
/// final states within 1e-12 in log probability count as tied.
ViterbiResult viterbi(const HmmParams& hmm, std::span<const ReactionLabel> observations);

/// Smoothed label for the last second of `window` (1..6 most recent
/// observations): the final state of the Viterbi path.
ReactionLabel smooth(std::span<const ReactionLabel> window, const HmmParams& hmm);

/// Applies smooth() at every position with a trailing window of up to
/// `window` observations.
std::vector<ReactionLabel> smooth_sequence(std::span<const ReactionLabel> observations,
                                           const HmmParams& hmm, int window = 6);

std::string hmm_to_json(const HmmParams& hmm);
HmmParams hmm_from_json(const std::string& text);
HmmParams load_hmm(const std::filesystem::path& path);
void save_hmm(const std::filesystem::path& path, const HmmParams& hmm);

}  // namespace earreact::vocal
