#include "contest/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "contest/commitment.hpp"
#include "contest/config.hpp"
#include "contest/errors.hpp"
#include "contest/selectors.hpp"
#include "contest/serialize.hpp"

namespace contest {

namespace fs = std::filesystem;

namespace {

TournamentConfig load_config(const std::string& path) {
  return path.empty() ? TournamentConfig{} : parse_config(read_file(path));
}

std::string score_text(double v) {
  char buf[64];
  if (v == std::floor(v) && std::fabs(v) < 1e15)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pct(int num, int den) {
  return den > 0 ? std::to_string(percent_half_up(num, den)) + "%" : "n/a";
}

}  // namespace

std::string cmd_simulate(const SimulateOptions& options, std::ostream& console) {
  TournamentConfig config = load_config(options.config_path);
  SimulationConfig sim = config.sim;
  if (options.seed) sim.seed = *options.seed;
  validate(sim);

  Rng truth_rng(derive_seed(sim.seed, 1));
  const GroundTruth truth = draw_ground_truth(sim, truth_rng);
  Rng data_rng(derive_seed(sim.seed, 2));
  const SimulatedData simulated = simulate_with_latent(truth, sim, data_rng);

  const std::string salt = options.random_salt ? random_salt() : derive_salt(sim.seed);
  const TruthCommitment c = commit(truth, salt);

  fs::create_directories(options.out_dir);
  const fs::path dir(options.out_dir);
  std::ostringstream csv;
  write_dataset_csv(simulated.data, csv);
  write_file((dir / "dataset.csv").string(), csv.str());
  write_file((dir / "truth.json").string(), truth_to_json(truth, salt));
  write_file((dir / "commitment.txt").string(), c.digest + "\n");
  if (options.write_latent) {
    std::ostringstream latent;
    write_latent_csv(simulated.confounders, latent);
    write_file((dir / "confounders.csv").string(), latent.str());
  }
  console << "dataset: " << (dir / "dataset.csv").string() << " (" << simulated.data.n()
          << " rows, " << simulated.data.d() << " variables, " << simulated.data.n_cases()
          << " cases)\n";
  console << "sealed truth: " << (dir / "truth.json").string() << "\n";
  console << "commitment: " << c.digest << "\n";
  return c.digest;
}

Submission cmd_select(const SelectOptions& options, std::ostream& console) {
  const TournamentConfig config = load_config(options.config_path);
  SelectorSpec spec = config.selector;
  spec.method = parse_method(options.method);
  spec.seed = options.seed;

  std::ifstream in(options.data_path, std::ios::binary);
  if (!in) throw Error("cannot open " + options.data_path);
  const Dataset data = read_dataset_csv(in);

  Submission sub;
  if (spec.method == Method::team_d) {
    const TeamDResult r = run_team_d(data, spec);
    sub = r.submission;
    if (!options.pvalue_table_path.empty()) {
      std::ostringstream table;
      table << "resample";
      for (int j = 1; j <= data.d(); ++j) table << ",x" << j;
      table << '\n' << std::setprecision(10);
      for (std::size_t row = 0; row < r.pvalues.size(); ++row) {
        table << row + 1;
        for (double p : r.pvalues[row]) table << ',' << p;
        table << '\n';
      }
      write_file(options.pvalue_table_path, table.str());
    }
  } else {
    sub = select(data, spec);
  }

  if (!options.out_path.empty()) write_file(options.out_path, submission_to_json(sub));
  console << sub.team << ":";
  for (int v : sub.selected) console << ' ' << v;
  console << '\n';
  return sub;
}

std::vector<ScoreReport> cmd_score(const ScoreOptions& options, std::ostream& console) {
  const SealedTruth sealed = truth_from_json(read_file(options.truth_path));
  if (options.digest && !verify(sealed.truth, sealed.salt, *options.digest))
    throw CommitmentMismatch("truth file " + options.truth_path +
                             " does not match the published commitment; refusing to score");
  const bool youden = options.weights == "youden";
  const ScoringWeights weights = youden ? ScoringWeights::table1() : resolve_weights(options.weights);
  const int d = sealed.truth.d();

  std::vector<ScoreReport> reports;
  for (const auto& path : options.submission_paths) {
    Submission s = submission_from_text(read_file(path), fs::path(path).stem().string());
    normalize(s, d);
    ScoreReport r = contest_score(s, sealed.truth, weights);
    if (youden) r.score = youden_index(s, sealed.truth, d);
    reports.push_back(r);
  }
  reports = rank_leaderboard(std::move(reports));

  const int k = sealed.truth.k();
  console << std::left << std::setw(6) << "rank" << std::setw(20) << "team" << std::setw(8)
          << "TP" << std::setw(8) << "TN" << (youden ? "youden" : "score") << '\n';
  std::ostringstream csv;
  csv << "rank,team,tp,fp,tn,fn,tp_pct,tn_pct,score\n";
  int rank = 0;
  for (const auto& r : reports) {
    ++rank;
    console << std::left << std::setw(6) << rank << std::setw(20) << r.team << std::setw(8)
            << pct(r.tp, k) << std::setw(8) << pct(r.tn, d - k) << score_text(r.score) << '\n';
    csv << rank << ',' << r.team << ',' << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << ','
        << (k > 0 ? std::to_string(percent_half_up(r.tp, k)) : "") << ','
        << (d - k > 0 ? std::to_string(percent_half_up(r.tn, d - k)) : "") << ','
        << score_text(r.score) << '\n';
  }
  if (!options.out_path.empty()) write_file(options.out_path, csv.str());
  return reports;
}

void cmd_verify_truth(const std::string& truth_path, const std::string& digest,
                      std::ostream& console) {
  const SealedTruth sealed = truth_from_json(read_file(truth_path));
  if (sealed.salt.empty()) throw ValidationError("truth file has no salt; cannot verify");
  if (!verify(sealed.truth, sealed.salt, digest))
    throw CommitmentMismatch("truth file " + truth_path + " does not match commitment " + digest);
  console << "commitment verified: " << digest << '\n';
}

TournamentResult cmd_tournament(const TournamentOptions& options, std::ostream& console) {
  if (options.config_path.empty()) throw ConfigError("tournament needs --config");
  TournamentConfig config = parse_config(read_file(options.config_path));
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    config.leaderboard_path = (fs::path(options.out_dir) / fs::path(config.leaderboard_path).filename()).string();
    config.results_path = (fs::path(options.out_dir) / fs::path(config.results_path).filename()).string();
  }
  const TournamentResult result = run_tournament(config, options.replicate);

  std::ostringstream results, board;
  write_results_csv(result, results);
  write_leaderboard_csv(result, board);
  write_file(config.results_path, results.str());
  write_file(config.leaderboard_path, board.str());

  int failed = 0;
  for (const auto& r : result.rows) failed += !r.ok;
  console << board.str();
  console << "runs: " << result.rows.size() << ", failed: " << failed << "\n";
  return result;
}

}  // namespace contest
