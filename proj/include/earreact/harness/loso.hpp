#pragma once

#include <span>
#include <string>
#include <vector>

namespace earreact::harness {

struct Fold {
  std::string subject;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// One fold per subject, in subject-id order. Item i belongs to
/// subject_of_item[i]. Throws ParameterError with fewer than two subjects.
std::vector<Fold> loso_split(std::span<const std::string> subject_of_item);

}  // namespace earreact::harness
