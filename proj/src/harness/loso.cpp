#include "earreact/harness/loso.hpp"

#include <set>

#include "earreact/core/errors.hpp"

namespace earreact::harness {

std::vector<Fold> loso_split(std::span<const std::string> subject_of_item) {
  const std::set<std::string> subjects(subject_of_item.begin(), subject_of_item.end());
  if (subjects.size() < 2) throw ParameterError("LOSO needs at least two subjects");
  std::vector<Fold> folds;
  for (const auto& subject : subjects) {
    Fold f;
    f.subject = subject;
    for (std::size_t i = 0; i < subject_of_item.size(); ++i) {
      (subject_of_item[i] == subject ? f.test : f.train).push_back(i);
    }
    folds.push_back(std::move(f));
  }
  return folds;
}

}  // namespace earreact::harness
