#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contest/scoring.hpp"
#include "contest/selectors.hpp"
#include "contest/sim.hpp"

namespace contest {

/// Repeated contests: every replicate draws a fresh truth and dataset and
/// runs every method on it.
struct TournamentConfig {
  int replicates = 1;
  std::vector<Method> methods;
  /// Parameter template for every method; `method` and `seed` are set per run.
  SelectorSpec selector;
  SimulationConfig sim;
  ScoringWeights weights;
  std::uint64_t master_seed = 0;
  std::string leaderboard_path = "leaderboard.csv";
  std::string results_path = "results.csv";
  int threads = 1;  // replicates evaluated concurrently
};

void validate(const TournamentConfig& config);

/// Seed of replicate r (1-based); pure function of (master_seed, r).
std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate);

struct ReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string method;
  bool ok = false;
  std::string error;  // exception message when !ok
  int k = 0;
  ScoreReport report;
  std::vector<int> selected;
};

struct MethodSummary {
  std::string method;
  int successes = 0;
  int failures = 0;
  double mean_score = 0.0;
  double mean_tp = 0.0;
  double mean_fp = 0.0;
  int wins = 0;  // replicates where the method tied for the top score
};

struct TournamentResult {
  std::vector<ReplicateRow> rows;  // replicate-major, methods in config order
  std::vector<MethodSummary> summary;  // by mean score, descending
};

/// Rows of one replicate; failures are recorded, never thrown.
std::vector<ReplicateRow> run_replicate(const TournamentConfig& config, int replicate);

/// All replicates, or only `only` when given. Output does not depend on the
/// number of threads or the order in which replicates finish.
TournamentResult run_tournament(const TournamentConfig& config, std::optional<int> only = {});

std::vector<MethodSummary> summarize(const TournamentConfig& config,
                                     const std::vector<ReplicateRow>& rows);

void write_results_csv(const TournamentResult& result, std::ostream& out);
void write_leaderboard_csv(const TournamentResult& result, std::ostream& out);

}  // namespace contest
