#include "earreact/engage/tree.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "json.hpp"

namespace earreact::engage {

namespace {

using json = nlohmann::json;

int majority(std::span<const TrainingSample> samples, std::span<const std::size_t> idx) {
  std::map<int, std::size_t> counts;
  for (auto i : idx) ++counts[samples[i].target];
  int best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [cls, n] : counts) {
    if (n > best_count) {  // ascending map order: ties keep the smaller class
      best = cls;
      best_count = n;
    }
  }
  return best;
}

double gini(const std::map<int, std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double sum_sq = 0.0;
  for (const auto& [cls, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;
};

class Builder {
 public:
  Builder(std::span<const TrainingSample> samples, std::size_t n_features, int max_depth,
          std::size_t min_leaf)
      : samples_(samples), n_features_(n_features), max_depth_(max_depth), min_leaf_(min_leaf) {}

  std::size_t build(std::vector<std::size_t> idx, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(DecisionTree::Node{});
    nodes_[id].value = majority(samples_, idx);

    bool pure = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) {
      return samples_[i].target == samples_[idx.front()].target;
    });
    if (pure || depth >= max_depth_ || idx.size() < 2 * min_leaf_) return id;

    const Split split = best_split(idx);
    if (!split.found) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : idx) {
      (samples_[i].features[split.feature] <= split.threshold ? left : right).push_back(i);
    }
    const std::size_t l = build(std::move(left), depth + 1);
    const std::size_t r = build(std::move(right), depth + 1);
    auto& node = nodes_[id];
    node.leaf = false;
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<DecisionTree::Node> take() { return std::move(nodes_); }

 private:
  Split best_split(const std::vector<std::size_t>& idx) const {
    Split best;
    const std::size_t n = idx.size();
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < n_features_; ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return samples_[a].features[f] < samples_[b].features[f];
      });
      std::map<int, std::size_t> left_counts;
      std::map<int, std::size_t> right_counts;
      for (auto i : order) ++right_counts[samples_[i].target];
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const int cls = samples_[order[k]].target;
        ++left_counts[cls];
        if (--right_counts[cls] == 0) right_counts.erase(cls);
        const double lo = samples_[order[k]].features[f];
        const double hi = samples_[order[k + 1]].features[f];
        if (!(lo < hi)) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        const double impurity =
            (static_cast<double>(nl) * gini(left_counts, nl) +
             static_cast<double>(nr) * gini(right_counts, nr)) /
            static_cast<double>(n);
        if (!best.found || impurity < best.impurity - 1e-12) {
          best = {true, f, lo + (hi - lo) / 2.0, impurity};
        }
      }
    }
    return best;
  }

  std::span<const TrainingSample> samples_;
  std::size_t n_features_;
  int max_depth_;
  std::size_t min_leaf_;
  std::vector<DecisionTree::Node> nodes_;
};

json node_to_json(const DecisionTree& tree, std::size_t id) {
  const auto& node = tree.nodes()[id];
  if (node.leaf) return json{{"value", node.value}};
  return json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", node_to_json(tree, node.left)},
              {"right", node_to_json(tree, node.right)}};
}

std::size_t node_from_json(const json& j, std::vector<DecisionTree::Node>& nodes,
                           std::size_t n_features) {
  if (!j.is_object()) throw ParseError("tree node must be an object");
  const std::size_t id = nodes.size();
  nodes.push_back(DecisionTree::Node{});
  if (j.contains("value")) {
    nodes[id].value = j.at("value").get<int>();
    return id;
  }
  const auto feature = j.at("feature").get<std::size_t>();
  if (feature >= n_features) throw ParseError("tree feature index out of range");
  const double threshold = j.at("threshold").get<double>();
  const std::size_t l = node_from_json(j.at("left"), nodes, n_features);
  const std::size_t r = node_from_json(j.at("right"), nodes, n_features);
  nodes[id] = DecisionTree::Node{false, 0, feature, threshold, l, r};
  return id;
}

}  // namespace

DecisionTree::DecisionTree(std::vector<Node> nodes, std::size_t n_features, int max_depth)
    : nodes_(std::move(nodes)), n_features_(n_features), max_depth_(max_depth) {
  if (nodes_.empty()) throw ParameterError("decision tree needs at least one node");
  for (const auto& node : nodes_) {
    if (node.leaf) continue;
    if (node.feature >= n_features_ || node.left >= nodes_.size() || node.right >= nodes_.size()) {
      throw ParameterError("malformed decision tree node");
    }
  }
}

std::size_t DecisionTree::leaf_index(std::span<const double> features) const {
  if (features.size() < n_features_) {
    throw ParameterError("feature vector shorter than the tree's feature count");
  }
  std::size_t id = 0;
  while (!nodes_[id].leaf) {
    const auto& node = nodes_[id];
    id = features[node.feature] <= node.threshold ? node.left : node.right;
  }
  return id;
}

int DecisionTree::predict(std::span<const double> features) const {
  return nodes_[leaf_index(features)].value;
}

int DecisionTree::depth() const {
  // Children always follow their parent in the array.
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].leaf) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

DecisionTree train_tree(std::span<const TrainingSample> samples, int max_depth, int min_leaf) {
  if (samples.empty()) throw ParameterError("train_tree needs at least one sample");
  if (max_depth < 0) throw ParameterError("max_depth must be non-negative");
  if (min_leaf < 1) throw ParameterError("min_leaf must be at least 1");
  const std::size_t n_features = samples.front().features.size();
  for (const auto& s : samples) {
    if (s.features.size() != n_features) throw ParameterError("ragged feature vectors");
  }
  std::vector<std::size_t> idx(samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Builder builder(samples, n_features, max_depth, static_cast<std::size_t>(min_leaf));
  builder.build(std::move(idx), 0);
  return DecisionTree(builder.take(), n_features, max_depth);
}

int predict_rating(std::span<const double> features, const DecisionTree& tree) {
  return std::clamp(tree.predict(features), 1, 5);
}

Familiarity predict_familiarity(std::span<const double> features, const DecisionTree& tree) {
  return tree.predict(features) == 0 ? Familiarity::kUnknown : Familiarity::kKnown;
}

std::string tree_to_json(const DecisionTree& tree, const std::string& task) {
  json j{{"task", task},
         {"max_depth", tree.max_depth()},
         {"n_features", tree.n_features()},
         {"root", node_to_json(tree, 0)}};
  return j.dump(2);
}

DecisionTree tree_from_json(const std::string& text, std::string* task) {
  try {
    const json j = json::parse(text);
    const auto n_features = j.at("n_features").get<std::size_t>();
    std::vector<DecisionTree::Node> nodes;
    node_from_json(j.at("root"), nodes, n_features);
    if (task != nullptr) *task = j.value("task", std::string());
    return DecisionTree(std::move(nodes), n_features, j.value("max_depth", 0));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid tree JSON: ") + e.what());
  }
}

DecisionTree load_tree(const std::filesystem::path& path, std::string* task) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tree file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return tree_from_json(buf.str(), task);
}

void save_tree(const std::filesystem::path& path, const DecisionTree& tree,
               const std::string& task) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write tree file " + path.string());
  out << tree_to_json(tree, task) << '\n';
}

}  // namespace earreact::engage
