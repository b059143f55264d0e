#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ordmet {

struct LawResult {
  std::string law;
  bool passed = true;
  std::size_t checked = 0;
  std::string witness;  // empty when passed
};

struct LawReport {
  std::vector<LawResult> laws;

  bool all_passed() const {
    for (const auto& l : laws)
      if (!l.passed) return false;
    return true;
  }

  const LawResult* find(std::string_view law) const {
    for (const auto& l : laws)
      if (l.law == law) return &l;
    return nullptr;
  }

  bool passed(std::string_view law) const {
    const auto* l = find(law);
    return l != nullptr && l->passed;
  }
};

}  // namespace ordmet
