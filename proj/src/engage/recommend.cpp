#include "earreact/engage/recommend.hpp"

#include <algorithm>

#include "earreact/core/errors.hpp"
#include "earreact/dsp/dtw.hpp"

namespace earreact::engage {

double pattern_distance(std::span<const int> a, std::span<const int> b) {
  return dsp::dtw(a, b, [](int x, int y) { return x == y ? 0.0 : 1.0; });
}

std::vector<Recommendation> recommend(std::span<const int> pattern,
                                      std::span<const PoolEntry> pool, std::size_t top_n) {
  if (pattern.empty()) throw ParameterError("recommendation pattern is empty");
  if (pool.empty()) throw ParameterError("recommendation pool is empty");
  std::vector<Recommendation> ranked;
  ranked.reserve(pool.size());
  for (const auto& entry : pool) {
    if (entry.pattern.empty()) throw ParameterError("pool song " + entry.song_id + " has no pattern");
    ranked.push_back({entry.song_id, pattern_distance(pattern, entry.pattern)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.song_id < b.song_id;
  });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

}  // namespace earreact::engage
