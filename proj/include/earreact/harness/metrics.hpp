#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "earreact/core/labels.hpp"
#include "earreact/vocal/pipeline.hpp"

namespace earreact::harness {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // truth count
  std::size_t predicted = 0;  // prediction count
};

struct EvalReport {
  std::size_t segments = 0;
  /// Labels occurring in truth or prediction, in label order.
  std::vector<ReactionLabel> classes;
  std::array<ClassMetrics, 4> per_class{};  // indexed by index_of(label)
  double macro_f1 = 0.0;
  /// confusion[truth][predicted]
  std::array<std::array<std::size_t, 4>, 4> confusion{};
  double filtering_ratio = 0.0;
  std::optional<double> mae;
  /// Mean of per-fold macro-F1, when the report pools several folds.
  std::optional<double> fold_mean_macro_f1;

  const ClassMetrics& metrics(ReactionLabel l) const { return per_class[index_of(l)]; }
};

/// Per-class precision/recall/F1 with 0/0 taken as 0; macro-F1 is the
/// unweighted mean over the classes present in truth or prediction.
/// Throws ParameterError on a length mismatch.
EvalReport evaluate(std::span<const ReactionLabel> predicted, std::span<const ReactionLabel> truth,
                    const FilteringStats& stats = {});

/// Throws ParameterError on a length mismatch or empty input.
double mean_absolute_error(std::span<const int> predicted, std::span<const int> truth);

/// F1 of the positive class of a binary task.
double binary_f1(const std::vector<bool>& predicted, const std::vector<bool>& truth);

std::string report_to_json(const EvalReport& report);

}  // namespace earreact::harness
