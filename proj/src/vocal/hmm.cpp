#include "earreact/vocal/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "json.hpp"

namespace earreact::vocal {

using nlohmann::json;

namespace {

std::size_t state_of(ReactionLabel l) {
  if (!is_vocal_label(l)) throw ParameterError("HMM alphabet has no head_motion");
  return index_of(l);
}

void check_row(std::span<const double> row, const char* what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ParameterError(std::string("HMM ") + what + " entries must be positive");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ParameterError(std::string("HMM ") + what + " row must sum to 1");
}

HmmRow normalized(const HmmRow& counts) {
  double sum = 0.0;
  for (double c : counts) sum += c;
  HmmRow row{};
  for (std::size_t i = 0; i < kHmmStates; ++i) row[i] = counts[i] / sum;
  return row;
}

}  // namespace

void HmmParams::validate() const {
  check_row(initial, "initial");
  for (const auto& row : transition) check_row(row, "transition");
  for (const auto& row : emission) check_row(row, "emission");
}

HmmParams train_hmm(std::span<const LabeledSequence> sequences, double laplace) {
  if (sequences.empty()) throw ParameterError("HMM training needs at least one sequence");
  if (!(laplace > 0.0)) throw ParameterError("laplace smoothing must be positive");

  HmmRow initial{};
  HmmMatrix transition{};
  HmmMatrix emission{};
  initial.fill(laplace);
  for (auto& row : transition) row.fill(laplace);
  for (auto& row : emission) row.fill(laplace);

  for (const auto& seq : sequences) {
    if (seq.observed.size() != seq.truth.size()) {
      throw ParameterError("observed and true sequences differ in length");
    }
    for (std::size_t t = 0; t < seq.truth.size(); ++t) {
      const std::size_t s = state_of(seq.truth[t]);
      initial[s] += 1.0;
      emission[s][state_of(seq.observed[t])] += 1.0;
      if (t > 0) transition[state_of(seq.truth[t - 1])][s] += 1.0;
    }
  }

  HmmParams hmm;
  hmm.initial = normalized(initial);
  for (std::size_t s = 0; s < kHmmStates; ++s) {
    hmm.transition[s] = normalized(transition[s]);
    hmm.emission[s] = normalized(emission[s]);
  }
  return hmm;
}

ViterbiResult viterbi(const HmmParams& hmm, std::span<const ReactionLabel> observations) {
  ViterbiResult result;
  const std::size_t n = observations.size();
  if (n == 0) return result;

  std::vector<std::array<double, kHmmStates>> score(n);
  std::vector<std::array<std::size_t, kHmmStates>> back(n);
  const std::size_t o0 = state_of(observations[0]);
  for (std::size_t s = 0; s < kHmmStates; ++s) {
    score[0][s] = std::log(hmm.initial[s]) + std::log(hmm.emission[s][o0]);
  }
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t o = state_of(observations[t]);
    for (std::size_t s = 0; s < kHmmStates; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t p = 0; p < kHmmStates; ++p) {
        const double v = score[t - 1][p] + std::log(hmm.transition[p][s]);
        if (v > best) {
          best = v;
          arg = p;
        }
      }
      score[t][s] = best + std::log(hmm.emission[s][o]);
      back[t][s] = arg;
    }
  }

  // Final states within 1e-12 of the best count as tied; the lowest wins.
  double top = score[n - 1][0];
  for (std::size_t s = 1; s < kHmmStates; ++s) top = std::max(top, score[n - 1][s]);
  std::size_t last = 0;
  while (score[n - 1][last] < top - 1e-12) ++last;
  result.log_prob = score[n - 1][last];
  std::vector<std::size_t> states(n);
  states[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) states[t - 1] = back[t][states[t]];
  result.path.reserve(n);
  for (std::size_t s : states) result.path.push_back(kVocalLabels[s]);
  return result;
}

ReactionLabel smooth(std::span<const ReactionLabel> window, const HmmParams& hmm) {
  if (window.empty() || window.size() > 6) throw ParameterError("smoothing window must hold 1..6 labels");
  return viterbi(hmm, window).path.back();
}

std::vector<ReactionLabel> smooth_sequence(std::span<const ReactionLabel> observations,
                                           const HmmParams& hmm, int window) {
  if (window < 1 || window > 6) throw ParameterError("smoothing window must be 1..6");
  std::vector<ReactionLabel> out;
  out.reserve(observations.size());
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t t = 0; t < observations.size(); ++t) {
    const std::size_t begin = t + 1 >= w ? t + 1 - w : 0;
    out.push_back(smooth(observations.subspan(begin, t + 1 - begin), hmm));
  }
  return out;
}

std::string hmm_to_json(const HmmParams& hmm) {
  json j;
  json states = json::array();
  for (ReactionLabel l : kVocalLabels) states.push_back(std::string(to_string(l)));
  j["states"] = states;
  j["initial"] = hmm.initial;
  j["transition"] = hmm.transition;
  j["emission"] = hmm.emission;
  return j.dump(2) + "\n";
}

HmmParams hmm_from_json(const std::string& text) {
  HmmParams hmm;
  try {
    const json j = json::parse(text);
    const auto states = j.at("states").get<std::vector<std::string>>();
    if (states.size() != kHmmStates) throw ParseError("HMM must have 3 states");
    for (std::size_t s = 0; s < kHmmStates; ++s) {
      if (states[s] != to_string(kVocalLabels[s])) {
        throw ParseError("HMM states must be non_reaction, singing_humming, whistling in order");
      }
    }
    hmm.initial = j.at("initial").get<HmmRow>();
    hmm.transition = j.at("transition").get<HmmMatrix>();
    hmm.emission = j.at("emission").get<HmmMatrix>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("HMM file: ") + e.what());
  }
  try {
    hmm.validate();
  } catch (const ParameterError& e) {
    throw ParseError(std::string("HMM file: ") + e.what());
  }
  return hmm;
}

HmmParams load_hmm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return hmm_from_json(ss.str());
}

void save_hmm(const std::filesystem::path& path, const HmmParams& hmm) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << hmm_to_json(hmm);
}

}  // namespace earreact::vocal
