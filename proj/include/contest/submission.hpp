#pragma once

#include <string>
#include <vector>

namespace contest {

/// A team's answer: 1-based variable indices believed to influence the outcome.
struct Submission {
  std::string team;
  std::vector<int> selected;  // ascending, unique
  std::string method_report;
};

/// Sorts and checks uniqueness and the 1..d range; throws ValidationError.
void normalize(Submission& submission, int d);

}  // namespace contest
