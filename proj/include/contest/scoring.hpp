#pragma once

#include <span>
#include <string>
#include <vector>

#include "contest/sim.hpp"
#include "contest/submission.hpp"

namespace contest {

/// Points per confusion cell. Rewards are positive, penalties non-positive.
struct ScoringWeights {
  double w_tp = 10.0;
  double w_fp = -10.0;
  double w_tn = 3.0;
  double w_fn = -3.0;

  /// Rule that reproduces the published leaderboard (44, 31, 44, 31).
  static ScoringWeights table1() { return {10.0, -10.0, 3.0, -3.0}; }
  /// Asymmetric variant that breaks the ties of `table1`; not a published rule.
  static ScoringWeights proposed() { return {10.0, -10.0, 3.0, -4.0}; }
};

/// Throws ConfigError unless w_tp > 0 >= w_fn and w_tn > 0 >= w_fp.
void validate(const ScoringWeights& weights);

struct Confusion {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  bool operator==(const Confusion&) const = default;
};

struct ScoreReport {
  std::string team;
  int tp = 0, fp = 0, tn = 0, fn = 0;
  double tpr = 0.0, tnr = 0.0;  // NaN when the denominator is zero
  double score = 0.0;
};

Confusion confusion_counts(const Submission& submission, const GroundTruth& truth, int d);
ScoreReport contest_score(const Submission& submission, const GroundTruth& truth,
                          const ScoringWeights& weights = ScoringWeights::table1());
double youden_index(const Submission& submission, const GroundTruth& truth, int d);

double brier_score(std::span<const double> probs, std::span<const std::uint8_t> y);
double log_score(std::span<const double> probs, std::span<const std::uint8_t> y);

/// Score descending, then fewer false positives, more true positives, team label.
std::vector<ScoreReport> rank_leaderboard(std::vector<ScoreReport> reports);

/// Whole percent of num/den rounded half-up, as printed on the leaderboard.
int percent_half_up(int num, int den);

}  // namespace contest
