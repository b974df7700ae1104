#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace earreact::engage {

struct TrainingSample {
  std::vector<double> features;
  int target = 0;
};

/// CART classification tree. Nodes live in a flat array; node 0 is the root.
/// An internal node sends x[feature] <= threshold left.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    int value = 0;  // majority class, leaves only
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, std::size_t n_features, int max_depth);

  /// Class of the leaf reached by `features`. Throws ParameterError when the
  /// input is shorter than the training feature count.
  int predict(std::span<const double> features) const;
  /// Index of the leaf reached by `features`.
  std::size_t leaf_index(std::span<const double> features) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }
  int max_depth() const { return max_depth_; }
  /// Edges on the longest root-to-leaf path.
  int depth() const;

 private:
  std::vector<Node> nodes_{Node{}};
  std::size_t n_features_ = 0;
  int max_depth_ = 0;
};

/// Greedy CART with Gini impurity. Candidate thresholds are midpoints between
/// consecutive distinct values; both children need at least min_leaf samples.
/// Splits are taken while a node is impure, shallower than max_depth and a
/// valid split exists, even when the best split leaves impurity unchanged.
/// Ties between candidate splits keep the lowest feature, then the lowest
/// threshold. Leaves hold the majority class, ties to the smaller class.
/// Throws ParameterError for an empty sample list, ragged feature vectors,
/// max_depth < 0 or min_leaf < 1.
DecisionTree train_tree(std::span<const TrainingSample> samples, int max_depth = 4,
                        int min_leaf = 2);

/// Rating on a 1..5 scale: the tree's class clamped into range.
int predict_rating(std::span<const double> features, const DecisionTree& tree);

enum class Familiarity { kUnknown = 0, kKnown = 1 };
/// Class 0 is unknown; any other class is known.
Familiarity predict_familiarity(std::span<const double> features, const DecisionTree& tree);

/// {"task": ..., "max_depth": d, "n_features": n, "root": node}; internal
/// nodes {"feature", "threshold", "left", "right"}, leaves {"value"}.
std::string tree_to_json(const DecisionTree& tree, const std::string& task);
DecisionTree tree_from_json(const std::string& text, std::string* task = nullptr);
DecisionTree load_tree(const std::filesystem::path& path, std::string* task = nullptr);
void save_tree(const std::filesystem::path& path, const DecisionTree& tree,
               const std::string& task);

}  // namespace earreact::engage
