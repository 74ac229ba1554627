#include <CLI11.hpp>
#include <iostream>

#include "contest/commands.hpp"
#include "contest/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variable-selection contest engine: simulate, select, score, tournament"};
  app.require_subcommand(1);

  contest::SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "simulate a contest dataset and seal its truth");
  simulate->add_option("--config", sim.config_path, "key = value simulation config")->check(CLI::ExistingFile);
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "simulation seed (overrides config)");
  simulate->add_option("--out", sim.out_dir, "output directory")->capture_default_str();
  simulate->add_flag("--latent", sim.write_latent, "also write latent confounders (instructor only)");
  simulate->add_flag("--random-salt", sim.random_salt, "draw the commitment salt from the OS");

  contest::SelectOptions sel;
  auto* select = app.add_subcommand("select", "run a selection method on a dataset");
  select->add_option("method", sel.method, "team_a|team_b|team_c|team_d|random_baseline|full_baseline|empty_baseline")->required();
  select->add_option("data", sel.data_path, "dataset CSV")->required();
  select->add_option("--seed", sel.seed, "method seed")->capture_default_str();
  select->add_option("--config", sel.config_path, "selector parameters")->check(CLI::ExistingFile);
  select->add_option("--out", sel.out_path, "submission JSON path");
  select->add_option("--pvalue-table", sel.pvalue_table_path, "team_d: write the resample p-value table CSV");

  contest::ScoreOptions sc;
  std::string digest;
  auto* score = app.add_subcommand("score", "score submissions against a sealed truth");
  score->add_option("truth", sc.truth_path, "truth JSON")->required();
  score->add_option("submissions", sc.submission_paths, "submission files (JSON or plain indices)");
  score->add_option("--weights", sc.weights, "table1, proposed, youden or a weights file")->capture_default_str();
  auto* digest_opt = score->add_option("--digest", digest, "published commitment to check first");
  score->add_option("--out", sc.out_path, "report CSV path");

  std::string verify_path, verify_digest;
  auto* verify = app.add_subcommand("verify-truth", "check a truth file against a commitment digest");
  verify->add_option("truth", verify_path, "truth JSON")->required();
  verify->add_option("digest", verify_digest, "commitment digest")->required();

  contest::TournamentOptions tour;
  int replicate = 0;
  auto* tournament = app.add_subcommand("tournament", "replicated contests with fresh truths");
  tournament->add_option("--config", tour.config_path, "tournament config")->required()->check(CLI::ExistingFile);
  auto* rep_opt = tournament->add_option("--replicate", replicate, "run only this replicate (1-based)");
  tournament->add_option("--out", tour.out_dir, "output directory for the CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the validation exit code; --help stays 0
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = sim_seed;
      contest::cmd_simulate(sim, std::cout);
    } else if (*select) {
      contest::cmd_select(sel, std::cout);
    } else if (*score) {
      if (*digest_opt) sc.digest = digest;
      contest::cmd_score(sc, std::cout);
    } else if (*verify) {
      contest::cmd_verify_truth(verify_path, verify_digest, std::cout);
    } else if (*tournament) {
      if (*rep_opt) tour.replicate = replicate;
      contest::cmd_tournament(tour, std::cout);
    }
  } catch (const contest::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
