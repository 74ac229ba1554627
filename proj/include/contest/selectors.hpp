#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "contest/glm.hpp"
#include "contest/sim.hpp"
#include "contest/submission.hpp"

namespace contest {

enum class Method { team_a, team_b, team_c, team_d, random_baseline, full_baseline, empty_baseline };

std::string_view method_name(Method method);
/// Throws ValidationError on an unknown name.
Method parse_method(std::string_view name);

struct SelectorSpec {
  Method method = Method::team_c;
  std::uint64_t seed = 0;

  // candidate model sizes (team A, team C, random baseline)
  int min_size = 3;
  int max_size = 7;

  // team A: holdout best subset
  double train_fraction = 0.75;

  // team B: lasso with one-standard-error rule, ridge as evidence
  int max_select = 3;
  int lasso_folds = 10;
  int lambda_points = 50;
  double lambda_ratio = 1e-3;
  int ridge_points = 10;

  // team C: exhaustive search
  int cv_folds = 4;
  std::uint64_t budget = 1'000'000;
  int threads = 0;  // 0 = hardware concurrency

  // team D: bootstrap p-values
  int n_resamples = 100;
  double threshold = 0.05;
  int max_d_select = 7;

  GlmControl glm;
};

/// Throws ConfigError when a parameter used by `spec.method` is out of range.
void validate(const SelectorSpec& spec, int d);

Submission select_team_a(const Dataset& data, const SelectorSpec& spec);
Submission select_team_b(const Dataset& data, const SelectorSpec& spec);

struct TeamCResult {
  Submission submission;
  std::uint64_t evaluated = 0;
  double best_cv_deviance = 0.0;
};

/// Team C ordering: lower CV deviance, then the smaller subset, then the
/// lexicographically first.
bool subset_precedes(double dev_a, const std::vector<int>& a, double dev_b, const std::vector<int>& b);

/// Number of subsets of {1..d} with size in [min_size, max_size].
std::uint64_t count_subsets(int d, int min_size, int max_size);

TeamCResult run_team_c(const Dataset& data, const SelectorSpec& spec);
Submission select_team_c(const Dataset& data, const SelectorSpec& spec);

struct TeamDResult {
  Submission submission;
  /// pvalues[r][j]: Wald p-value of variable j+1 in resample r.
  std::vector<std::vector<double>> pvalues;
  std::vector<double> medians;
};

TeamDResult run_team_d(const Dataset& data, const SelectorSpec& spec);
Submission select_team_d(const Dataset& data, const SelectorSpec& spec);

Submission select_baseline(const Dataset& data, const SelectorSpec& spec);

/// Dispatches on spec.method.
Submission select(const Dataset& data, const SelectorSpec& spec);

}  // namespace contest
