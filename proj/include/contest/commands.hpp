#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contest/scoring.hpp"
#include "contest/tournament.hpp"

namespace contest {

/// Bodies of the CLI verbs. Errors are thrown as contest::Error subclasses;
/// their exit_code() is what the executable returns.

struct SimulateOptions {
  std::string config_path;  // optional
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool write_latent = false;
  bool random_salt = false;
};

/// Writes dataset.csv, truth.json and commitment.txt into out_dir and
/// prints the digest. Returns the digest.
std::string cmd_simulate(const SimulateOptions& options, std::ostream& console);

struct SelectOptions {
  std::string method;
  std::string data_path;
  std::uint64_t seed = 0;
  std::string config_path;  // optional selector parameters
  std::string out_path;
  std::string pvalue_table_path;  // team_d only
};

Submission cmd_select(const SelectOptions& options, std::ostream& console);

struct ScoreOptions {
  std::string truth_path;
  std::vector<std::string> submission_paths;
  std::string weights = "table1";  // table1, proposed, youden or a file
  std::optional<std::string> digest;
  std::string out_path;  // optional report CSV
};

/// Returns the ranked reports. With weights = youden the score column holds
/// Youden's index.
std::vector<ScoreReport> cmd_score(const ScoreOptions& options, std::ostream& console);

/// Throws CommitmentMismatch when the truth file does not match `digest`.
void cmd_verify_truth(const std::string& truth_path, const std::string& digest,
                      std::ostream& console);

struct TournamentOptions {
  std::string config_path;
  std::optional<int> replicate;
  std::string out_dir;  // overrides the directory of the configured outputs
};

TournamentResult cmd_tournament(const TournamentOptions& options, std::ostream& console);

}  // namespace contest
