#pragma once

#include <span>

#include "earreact/dsp/chroma.hpp"
#include "earreact/vocal/hmm.hpp"

namespace earreact::harness {

/// Minimum cost over every monotone alignment path, enumerated one by one.
/// Throws ParameterError for empty inputs or lengths above 8.
double dtw_oracle(std::span<const dsp::Chroma> a, std::span<const dsp::Chroma> b);

/// Best hidden path by scoring all 3^n state sequences. Among paths within
/// 1e-12 of the best log probability, the lowest final state wins.
/// Throws ParameterError unless 1 <= n <= 6.
vocal::ViterbiResult viterbi_oracle(const vocal::HmmParams& hmm,
                                    std::span<const ReactionLabel> window);

/// Log joint probability of a hidden path and the observations.
double path_log_prob(const vocal::HmmParams& hmm, std::span<const ReactionLabel> path,
                     std::span<const ReactionLabel> observations);

}  // namespace earreact::harness
