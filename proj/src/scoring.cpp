#include "contest/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contest/errors.hpp"

namespace contest {

void normalize(Submission& s, int d) {
  std::sort(s.selected.begin(), s.selected.end());
  for (int index : s.selected)
    if (index < 1 || index > d)
      throw ValidationError("submission '" + s.team + "' selects variable " +
                            std::to_string(index) + ", outside 1.." + std::to_string(d));
  if (std::adjacent_find(s.selected.begin(), s.selected.end()) != s.selected.end())
    throw ValidationError("submission '" + s.team + "' selects a variable twice");
}

void validate(const ScoringWeights& w) {
  if (!(w.w_tp > 0.0 && w.w_fn <= 0.0 && w.w_tn > 0.0 && w.w_fp <= 0.0))
    throw ConfigError("scoring weights need w_tp > 0 >= w_fn and w_tn > 0 >= w_fp");
}

Confusion confusion_counts(const Submission& submission, const GroundTruth& truth, int d) {
  Submission s = submission;
  normalize(s, d);
  Confusion c;
  for (int index : s.selected) (truth.is_relevant(index) ? c.tp : c.fp)++;
  c.fn = truth.k() - c.tp;
  c.tn = d - c.tp - c.fp - c.fn;
  return c;
}

ScoreReport contest_score(const Submission& submission, const GroundTruth& truth,
                          const ScoringWeights& w) {
  const int d = truth.d();
  const Confusion c = confusion_counts(submission, truth, d);
  ScoreReport r;
  r.team = submission.team;
  r.tp = c.tp;
  r.fp = c.fp;
  r.tn = c.tn;
  r.fn = c.fn;
  const int k = truth.k();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  r.tpr = k > 0 ? static_cast<double>(c.tp) / k : nan;
  r.tnr = d - k > 0 ? static_cast<double>(c.tn) / (d - k) : nan;
  r.score = w.w_tp * c.tp + w.w_fp * c.fp + w.w_tn * c.tn + w.w_fn * c.fn;
  return r;
}

double youden_index(const Submission& submission, const GroundTruth& truth, int d) {
  const int k = truth.k();
  if (k == 0 || k == d) throw UndefinedRateError("Youden's index needs 0 < k < d");
  const Confusion c = confusion_counts(submission, truth, d);
  return static_cast<double>(c.tp) / k + static_cast<double>(c.tn) / (d - k) - 1.0;
}

namespace {

void check_forecasts(std::span<const double> probs, std::span<const std::uint8_t> y) {
  if (probs.size() != y.size())
    throw ValidationError("forecast length " + std::to_string(probs.size()) +
                          " != outcome length " + std::to_string(y.size()));
  if (probs.empty()) throw ValidationError("no forecasts to score");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("forecast outside [0, 1]");
}

}  // namespace

double brier_score(std::span<const double> probs, std::span<const std::uint8_t> y) {
  check_forecasts(probs, y);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = probs[i] - (y[i] ? 1.0 : 0.0);
    s += e * e;
  }
  return s / static_cast<double>(y.size());
}

double log_score(std::span<const double> probs, std::span<const std::uint8_t> y) {
  check_forecasts(probs, y);
  constexpr double eps = 1e-12;
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = std::clamp(probs[i], eps, 1.0 - eps);
    s -= y[i] ? std::log(p) : std::log1p(-p);
  }
  return s / static_cast<double>(y.size());
}

std::vector<ScoreReport> rank_leaderboard(std::vector<ScoreReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const ScoreReport& a, const ScoreReport& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.fp != b.fp) return a.fp < b.fp;
    if (a.tp != b.tp) return a.tp > b.tp;
    return a.team < b.team;
  });
  return reports;
}

int percent_half_up(int num, int den) {
  if (den <= 0) throw UndefinedRateError("percentage with zero denominator");
  return (200 * num + den) / (2 * den);
}

}  // namespace contest
