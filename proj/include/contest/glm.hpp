#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "contest/rng.hpp"
#include "contest/sim.hpp"

namespace contest {

enum class PenaltyKind { none, ridge, lasso };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::none;
  double lambda = 0.0;
  bool penalize_intercept = false;

  static PenaltySpec none() { return {}; }
  static PenaltySpec ridge(double lambda) { return {PenaltyKind::ridge, lambda, false}; }
  static PenaltySpec lasso(double lambda) { return {PenaltyKind::lasso, lambda, false}; }
};

/// Fixed numerical constants of the IRLS fitter.
struct GlmControl {
  double tolerance = 1e-10;  // relative objective change
  int max_iterations = 100;
  double separation_threshold = 15.0;  // |coefficient| that signals separation
  double fallback_ridge = 1e-6;
  int max_halvings = 40;
};

struct FitResult {
  /// coefficients[0] is the intercept, coefficients[j] the log OR of the
  /// j-th fitted column.
  std::vector<double> coefficients;
  /// Present for unpenalized fits, including those rescued by the
  /// separation fallback (then computed from the penalized information).
  std::optional<std::vector<double>> std_errors;
  double deviance = 0.0;
  bool converged = false;
  int iterations = 0;
  bool separation_flag = false;
  PenaltySpec penalty;
  /// Deviance after each accepted IRLS step, starting at the initial point.
  std::vector<double> deviance_trace;

  int n_slopes() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Binomial data with one row per distinct covariate pattern. Rows are
/// ordered by pattern key (bit i set when column i of the pattern is 1), so
/// grouping is independent of the order of the original observations.
struct GroupedData {
  int p = 0;
  std::vector<std::uint64_t> keys;
  std::vector<double> trials;
  std::vector<double> successes;

  int groups() const { return static_cast<int>(keys.size()); }
  double x(int g, int j) const { return static_cast<double>((keys[g] >> j) & 1U); }
  double total_trials() const;
  double total_successes() const;
};

/// Groups the rows `rows` (all rows when empty; repeats allowed) of `x`
/// restricted to `columns` (0-based, at most 64).
GroupedData group_rows(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                       std::span<const int> columns, std::span<const int> rows = {});

/// All columns of `x` in order.
std::vector<int> all_columns(const BinaryMatrix& x);

double log_likelihood(const GroupedData& data, std::span<const double> beta);
/// Gradient of the log-likelihood with respect to (intercept, slopes).
std::vector<double> score(const GroupedData& data, std::span<const double> beta);
inline double deviance(const GroupedData& data, std::span<const double> beta) {
  return -2.0 * log_likelihood(data, beta);
}

/// Maximum-likelihood (penalty none) or ridge logistic fit by IRLS with
/// step-halving. The ridge objective is -loglik + lambda * |slopes|^2.
FitResult fit_logistic(const GroupedData& data, const PenaltySpec& penalty = {},
                       const GlmControl& control = {});
FitResult fit_logistic(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                       const PenaltySpec& penalty = {}, const GlmControl& control = {});

/// Two-sided Wald p-values of the slopes.
std::vector<double> wald_pvalues(const FitResult& fit);

/// Fold labels are 0-based.
struct CvPlan {
  int n_folds = 0;
  std::vector<int> assignments;
  bool stratified = true;

  std::vector<int> training_rows(int fold) const;
  std::vector<int> test_rows(int fold) const;
};

/// Stratified folds: cases and controls are shuffled separately and dealt
/// round-robin.
CvPlan make_folds(std::span<const std::uint8_t> y, int n_folds, Rng& rng);

/// Held-out deviance summed within each fold, for a model on `columns`.
std::vector<double> cv_fold_deviances(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                                      std::span<const int> columns, const CvPlan& plan,
                                      const PenaltySpec& penalty = {},
                                      const GlmControl& control = {});
/// Mean held-out deviance per observation.
double cv_deviance(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                   std::span<const int> columns, const CvPlan& plan,
                   const PenaltySpec& penalty = {}, const GlmControl& control = {});

/// n row indices (0-based) drawn uniformly with replacement.
std::vector<int> bootstrap_resample(int n, Rng& rng);

double expit(double eta);
double logit(double p);
/// Standard normal upper-tail-doubled probability 2 * (1 - Phi(|z|)).
double two_sided_normal_p(double z);

}  // namespace contest
