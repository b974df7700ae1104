#pragma once

#include <span>
#include <string>
#include <vector>

namespace earreact::engage {

struct PoolEntry {
  std::string song_id;
  std::vector<int> pattern;  // reaction indices 0..3, one per second
};

struct Recommendation {
  std::string song_id;
  double distance = 0.0;
};

/// DTW distance with 0/1 local cost between reaction-index sequences.
double pattern_distance(std::span<const int> a, std::span<const int> b);

/// Pool songs by ascending pattern distance, ties by song_id; at most top_n.
/// Throws ParameterError for an empty pattern, empty pool or an empty pool
/// pattern.
std::vector<Recommendation> recommend(std::span<const int> pattern,
                                      std::span<const PoolEntry> pool, std::size_t top_n);

}  // namespace earreact::engage
