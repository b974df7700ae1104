#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "earreact/core/errors.hpp"
#include "earreact/dsp/chroma.hpp"

namespace earreact::dsp {

/// Unnormalized DTW: minimum over monotone alignments with steps (1,1),
/// (1,0), (0,1) of the summed local cost. Two-row dynamic program.
template <typename T, typename Cost>
double dtw(std::span<const T> a, std::span<const T> b, Cost&& cost) {
  if (a.empty() || b.empty()) throw ParameterError("DTW of an empty sequence");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(b.size(), inf);
  std::vector<double> cur(b.size(), inf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double local = cost(a[i], b[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, cur[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      cur[j] = best + local;
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

/// DTW between chroma sequences with the circular chroma_cost.
inline double dtw_distance(std::span<const Chroma> a, std::span<const Chroma> b) {
  return dtw(a, b, chroma_cost);
}

}  // namespace earreact::dsp
