#include "earreact/harness/oracles.hpp"

#include <cmath>
#include <limits>

#include "earreact/core/errors.hpp"

namespace earreact::harness {

namespace {

constexpr std::size_t kMaxDtwLength = 8;
constexpr std::size_t kMaxViterbiWindow = 6;
constexpr double kTieTolerance = 1e-12;

// Walks every path from (i, j) to the end, tracking the accumulated cost.
void enumerate_paths(std::span<const dsp::Chroma> a, std::span<const dsp::Chroma> b, std::size_t i,
                     std::size_t j, double acc, double& best) {
  acc += dsp::chroma_cost(a[i], b[j]);
  if (i + 1 == a.size() && j + 1 == b.size()) {
    if (acc < best) best = acc;
    return;
  }
  if (i + 1 < a.size()) enumerate_paths(a, b, i + 1, j, acc, best);
  if (j + 1 < b.size()) enumerate_paths(a, b, i, j + 1, acc, best);
  if (i + 1 < a.size() && j + 1 < b.size()) enumerate_paths(a, b, i + 1, j + 1, acc, best);
}

std::size_t state_index(ReactionLabel l) {
  for (std::size_t s = 0; s < vocal::kHmmStates; ++s) {
    if (kVocalLabels[s] == l) return s;
  }
  throw ParameterError("label outside the vocal HMM alphabet");
}

}  // namespace

double dtw_oracle(std::span<const dsp::Chroma> a, std::span<const dsp::Chroma> b) {
  if (a.empty() || b.empty()) throw ParameterError("DTW oracle needs non-empty sequences");
  if (a.size() > kMaxDtwLength || b.size() > kMaxDtwLength) {
    throw ParameterError("DTW oracle is limited to length 8");
  }
  double best = std::numeric_limits<double>::infinity();
  enumerate_paths(a, b, 0, 0, 0.0, best);
  return best;
}

double path_log_prob(const vocal::HmmParams& hmm, std::span<const ReactionLabel> path,
                     std::span<const ReactionLabel> observations) {
  if (path.size() != observations.size() || path.empty()) {
    throw ParameterError("path and observations must be non-empty and equal length");
  }
  double lp = std::log(hmm.initial[state_index(path[0])]);
  for (std::size_t t = 0; t < path.size(); ++t) {
    const std::size_t s = state_index(path[t]);
    if (t > 0) lp += std::log(hmm.transition[state_index(path[t - 1])][s]);
    lp += std::log(hmm.emission[s][state_index(observations[t])]);
  }
  return lp;
}

vocal::ViterbiResult viterbi_oracle(const vocal::HmmParams& hmm,
                                    std::span<const ReactionLabel> window) {
  const std::size_t n = window.size();
  if (n == 0 || n > kMaxViterbiWindow) throw ParameterError("Viterbi oracle window must be 1..6");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= vocal::kHmmStates;

  vocal::ViterbiResult best;
  best.log_prob = -std::numeric_limits<double>::infinity();
  std::vector<ReactionLabel> path(n);
  for (std::size_t code = 0; code < total; ++code) {
    // The final state is the most significant digit, so among tied paths the
    // lowest final state is met first.
    std::size_t c = code;
    for (std::size_t t = 0; t < n; ++t) {
      path[t] = kVocalLabels[c % vocal::kHmmStates];
      c /= vocal::kHmmStates;
    }
    const double lp = path_log_prob(hmm, path, window);
    if (lp > best.log_prob + kTieTolerance) {
      best.log_prob = lp;
      best.path = path;
    }
  }
  return best;
}

}  // namespace earreact::harness
