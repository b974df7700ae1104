#include "earreact/harness/metrics.hpp"

#include <cmath>
#include <cstdlib>

#include "earreact/core/errors.hpp"
#include "json.hpp"

namespace earreact::harness {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

EvalReport evaluate(std::span<const ReactionLabel> predicted, std::span<const ReactionLabel> truth,
                    const FilteringStats& stats) {
  if (predicted.size() != truth.size()) {
    throw ParameterError("predicted and truth label sequences differ in length");
  }
  EvalReport r;
  r.segments = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++r.confusion[index_of(truth[i])][index_of(predicted[i])];
  }
  double f1_sum = 0.0;
  for (auto label : kAllLabels) {
    const std::size_t c = index_of(label);
    auto& m = r.per_class[c];
    const std::size_t tp = r.confusion[c][c];
    for (std::size_t k = 0; k < 4; ++k) {
      m.support += r.confusion[c][k];
      m.predicted += r.confusion[k][c];
    }
    m.precision = ratio(tp, m.predicted);
    m.recall = ratio(tp, m.support);
    m.f1 = f1_of(m.precision, m.recall);
    if (m.support > 0 || m.predicted > 0) {
      r.classes.push_back(label);
      f1_sum += m.f1;
    }
  }
  r.macro_f1 = r.classes.empty() ? 0.0 : f1_sum / static_cast<double>(r.classes.size());
  r.filtering_ratio = stats.filtering_ratio();
  return r;
}

double mean_absolute_error(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw ParameterError("MAE inputs differ in length");
  if (truth.empty()) throw ParameterError("MAE of empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::abs(predicted[i] - truth[i]);
  return sum / static_cast<double>(truth.size());
}

double binary_f1(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) throw ParameterError("F1 inputs differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] && truth[i]) ++tp;
    if (predicted[i] && !truth[i]) ++fp;
    if (!predicted[i] && truth[i]) ++fn;
  }
  return f1_of(ratio(tp, tp + fp), ratio(tp, tp + fn));
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  // ordered_json keeps the field order stable in the written file.
  nlohmann::ordered_json j;
  j["segments"] = report.segments;
  j["macro_f1"] = report.macro_f1;
  if (report.fold_mean_macro_f1) j["fold_mean_macro_f1"] = *report.fold_mean_macro_f1;
  j["filtering_ratio"] = report.filtering_ratio;
  if (report.mae) j["mae"] = *report.mae;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (auto label : report.classes) {
    const auto& m = report.metrics(label);
    classes[std::string(to_string(label))] = {{"precision", m.precision},
                                              {"recall", m.recall},
                                              {"f1", m.f1},
                                              {"support", m.support},
                                              {"predicted", m.predicted}};
  }
  j["classes"] = classes;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (auto label : kAllLabels) labels.push_back(std::string(to_string(label)));
  j["confusion"] = {{"labels", labels}, {"matrix", report.confusion}};
  return j.dump(2);
}

}  // namespace earreact::harness
