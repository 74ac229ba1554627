#include <doctest.h>

#include <cmath>
#include <limits>

#include "contest/errors.hpp"
#include "contest/scoring.hpp"
#include "support/table1.hpp"

using namespace contest;

TEST_CASE("published submissions: confusion counts, rates, scores") {
  const GroundTruth truth = fixture::table1_truth();
  const auto subs = fixture::table1_submissions();
  const Confusion a = confusion_counts(subs[0], truth, 20);
  CHECK(a == Confusion{4, 2, 11, 3});
  CHECK(percent_half_up(a.tp, 7) == 57);
  CHECK(percent_half_up(a.tn, 13) == 85);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    const ScoreReport r = contest_score(subs[i], truth);
    CHECK(r.score == fixture::kTable1Rows[i].score);
    CHECK(percent_half_up(r.tp, 7) == fixture::kTable1Rows[i].tp_pct);
    CHECK(percent_half_up(r.tn, 13) == fixture::kTable1Rows[i].tn_pct);
    CHECK(r.tpr == doctest::Approx(r.tp / 7.0));
    CHECK(r.tnr == doctest::Approx(r.tn / 13.0));
  }
  CHECK(confusion_counts(subs[1], truth, 20) == Confusion{2, 1, 12, 5});
  CHECK(confusion_counts(subs[3], truth, 20) == Confusion{3, 2, 11, 4});
}

TEST_CASE("boundary submissions") {
  const GroundTruth truth = fixture::table1_truth();
  const Submission empty{"empty", {}, ""};
  CHECK(confusion_counts(empty, truth, 20) == Confusion{0, 0, 13, 7});
  const Submission perfect{"perfect", truth.relevant, ""};
  CHECK(confusion_counts(perfect, truth, 20) == Confusion{7, 0, 13, 0});
  CHECK(contest_score(perfect, truth).score == 109);
  CHECK(youden_index(perfect, truth, 20) == doctest::Approx(1.0));
  CHECK(youden_index(empty, truth, 20) == doctest::Approx(0.0));
  Submission full{"full", {}, ""};
  for (int j = 1; j <= 20; ++j) full.selected.push_back(j);
  CHECK(youden_index(full, truth, 20) == doctest::Approx(0.0));
}

TEST_CASE("Youden's index of team A") {
  const GroundTruth truth = fixture::table1_truth();
  const double j = youden_index(fixture::table1_submissions()[0], truth, 20);
  CHECK(j == doctest::Approx(4.0 / 7 + 11.0 / 13 - 1).epsilon(1e-12));
  CHECK(j == doctest::Approx(0.4176).epsilon(1e-3));
}

TEST_CASE("Youden's index is undefined without both classes") {
  SimulationConfig c;
  const GroundTruth none = make_ground_truth(c, {});
  CHECK_THROWS_AS(youden_index(Submission{"x", {1}, ""}, none, 20), UndefinedRateError);
  std::map<int, double> all;
  for (int j = 1; j <= 20; ++j) all[j] = 1.0;
  CHECK_THROWS_AS(youden_index(Submission{"x", {1}, ""}, make_ground_truth(c, all), 20),
                  UndefinedRateError);
}

TEST_CASE("out-of-range or duplicate indices are validation errors") {
  const GroundTruth truth = fixture::table1_truth();
  CHECK_THROWS_AS(confusion_counts(Submission{"x", {21}, ""}, truth, 20), ValidationError);
  CHECK_THROWS_AS(confusion_counts(Submission{"x", {0}, ""}, truth, 20), ValidationError);
  CHECK_THROWS_AS(confusion_counts(Submission{"x", {3, 3}, ""}, truth, 20), ValidationError);
}

TEST_CASE("score is linear, decomposes, and moves by +-13 per variable") {
  Rng rng(42);
  const SimulationConfig c;
  const ScoringWeights w;
  for (int trial = 0; trial < 500; ++trial) {
    const GroundTruth truth = draw_ground_truth(c, rng);
    Submission s{"s", {}, ""};
    for (int j = 1; j <= 20; ++j)
      if (rng.bernoulli(0.3)) s.selected.push_back(j);
    const ScoreReport r = contest_score(s, truth, w);
    CHECK(r.tp + r.fn == truth.k());
    CHECK(r.fp + r.tn == 20 - truth.k());
    CHECK(r.score == w.w_tp * r.tp + w.w_fp * r.fp + w.w_tn * r.tn + w.w_fn * r.fn);

    for (int j = 1; j <= 20; ++j) {
      if (std::find(s.selected.begin(), s.selected.end(), j) != s.selected.end()) continue;
      Submission more = s;
      more.selected.push_back(j);
      const double delta = contest_score(more, truth, w).score - r.score;
      CHECK(delta == (truth.is_relevant(j) ? 13.0 : -13.0));
    }
    const double best = w.w_tp * truth.k() + w.w_tn * (20 - truth.k());
    CHECK(r.score <= best);
    if (s.selected != truth.relevant) CHECK(r.score < best);
    CHECK(contest_score(Submission{"t", truth.relevant, ""}, truth, w).score == best);
  }
}

TEST_CASE("Youden's index ignores the scoring weights") {
  const GroundTruth truth = fixture::table1_truth();
  const Submission a = fixture::table1_submissions()[0];
  const double y = youden_index(a, truth, 20);
  const ScoreReport r1 = contest_score(a, truth, ScoringWeights::table1());
  const ScoreReport r2 = contest_score(a, truth, ScoringWeights::proposed());
  CHECK(r1.tpr + r1.tnr - 1 == doctest::Approx(y));
  CHECK(r2.tpr + r2.tnr - 1 == doctest::Approx(y));
}

TEST_CASE("table1 weights are the unique symmetric integer reconstruction") {
  const GroundTruth truth = fixture::table1_truth();
  const auto subs = fixture::table1_submissions();
  std::vector<Confusion> counts;
  for (const auto& s : subs) counts.push_back(confusion_counts(s, truth, 20));
  int symmetric_hits = 0;
  ScoringWeights found;
  for (int tp = -20; tp <= 20; ++tp)
    for (int fp = -20; fp <= 20; ++fp)
      for (int tn = -20; tn <= 20; ++tn)
        for (int fn = -20; fn <= 20; ++fn) {
          if (fp != -tp || fn != -tn) continue;
          bool all = true;
          for (std::size_t i = 0; i < counts.size() && all; ++i)
            all = tp * counts[i].tp + fp * counts[i].fp + tn * counts[i].tn + fn * counts[i].fn ==
                  fixture::kTable1Rows[i].score;
          if (all) {
            ++symmetric_hits;
            found = {double(tp), double(fp), double(tn), double(fn)};
          }
        }
  CHECK(symmetric_hits == 1);
  CHECK(found.w_tp == 10);
  CHECK(found.w_fp == -10);
  CHECK(found.w_tn == 3);
  CHECK(found.w_fn == -3);
}

TEST_CASE("proposed preset breaks the A/C tie structure") {
  const GroundTruth truth = fixture::table1_truth();
  const auto subs = fixture::table1_submissions();
  const double b = contest_score(subs[1], truth, ScoringWeights::proposed()).score;
  const double d = contest_score(subs[3], truth, ScoringWeights::proposed()).score;
  CHECK(b != d);
  CHECK_NOTHROW(validate(ScoringWeights::proposed()));
  CHECK_THROWS_AS(validate(ScoringWeights{-1, -10, 3, -3}), ConfigError);
  CHECK_THROWS_AS(validate(ScoringWeights{10, 1, 3, -3}), ConfigError);
}

TEST_CASE("Brier and logarithmic scores") {
  const std::vector<std::uint8_t> y = {1, 0, 1, 1, 0};
  const std::vector<double> exact = {1, 0, 1, 1, 0};
  const std::vector<double> half(5, 0.5);
  CHECK(brier_score(exact, y) == 0.0);
  CHECK(brier_score(half, y) == doctest::Approx(0.25));
  CHECK(log_score(exact, y) <= 1e-11);
  CHECK(log_score(half, y) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(brier_score(std::vector<double>{0.5}, y), ValidationError);
  CHECK_THROWS_AS(log_score(std::vector<double>{0.5, 0.5, 0.5, 0.5, 1.5}, y), ValidationError);
}

TEST_CASE("Brier and log scores are proper: expected score minimized at the truth") {
  const double q = 0.7;
  // expected score of forecast f for an event of probability q, computed
  // with the library on a two-point outcome distribution
  auto expected = [q](auto rule, double f) {
    const std::vector<double> p1 = {f}, p0 = {f};
    const std::vector<std::uint8_t> one = {1}, zero = {0};
    return q * rule(p1, one) + (1 - q) * rule(p0, zero);
  };
  auto brier = [](const std::vector<double>& p, const std::vector<std::uint8_t>& y) { return brier_score(p, y); };
  auto logs = [](const std::vector<double>& p, const std::vector<std::uint8_t>& y) { return log_score(p, y); };
  double best_b = INFINITY, best_l = INFINITY, arg_b = -1, arg_l = -1;
  for (int i = 1; i < 100; ++i) {
    const double f = i / 100.0;
    const double b = expected(brier, f), l = expected(logs, f);
    // closed forms
    CHECK(b == doctest::Approx(q * (1 - f) * (1 - f) + (1 - q) * f * f));
    CHECK(l == doctest::Approx(-q * std::log(f) - (1 - q) * std::log(1 - f)));
    if (b < best_b) best_b = b, arg_b = f;
    if (l < best_l) best_l = l, arg_l = f;
  }
  CHECK(arg_b == doctest::Approx(0.7));
  CHECK(arg_l == doctest::Approx(0.7));
}

TEST_CASE("leaderboard ordering") {
  const GroundTruth truth = fixture::table1_truth();
  std::vector<ScoreReport> reports;
  for (const auto& s : fixture::table1_submissions()) reports.push_back(contest_score(s, truth));
  // feed in reverse to show the order does not depend on input order
  std::reverse(reports.begin(), reports.end());
  const auto ranked = rank_leaderboard(reports);
  std::vector<std::string> order;
  for (const auto& r : ranked) order.push_back(r.team);
  // B and D tie on score; B has fewer false positives
  CHECK(order == std::vector<std::string>{"A", "C", "B", "D"});

  CHECK(rank_leaderboard({reports[0]}).size() == 1);
  std::vector<ScoreReport> same(3);
  same[0].team = "z";
  same[1].team = "a";
  same[2].team = "m";
  const auto by_label = rank_leaderboard(same);
  CHECK(by_label[0].team == "a");
  CHECK(by_label[1].team == "m");
  CHECK(by_label[2].team == "z");
}

TEST_CASE("percentages round half up") {
  CHECK(percent_half_up(1, 8) == 13);  // 12.5
  CHECK(percent_half_up(2, 7) == 29);
  CHECK(percent_half_up(12, 13) == 92);
  CHECK(percent_half_up(0, 5) == 0);
  CHECK(percent_half_up(5, 5) == 100);
}
