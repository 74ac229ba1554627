#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "contest/rng.hpp"

namespace contest {

/// Knobs of the case-control generator. Defaults reproduce the classroom
/// contest: 20 sparse binary drugs, 2,000 cases and 2,000 controls.
struct SimulationConfig {
  int d = 20;
  int n_cases = 2000;
  int n_controls = 2000;
  double prev_max = 0.03;
  double prev_min = 0.001;
  int k_min = 3;
  int k_max = 7;
  double effect_lo = 0.5;
  double effect_hi = 1.5;
  int n_confounders = 2;
  double confounder_prev = 0.01;
  /// Number of non-relevant risk factors each confounder is linked to.
  int confounder_links = 2;
  /// Conditional prevalence multiplier of a linked factor when its
  /// confounder is active, capped at `confounder_prev_cap`.
  double confounder_boost = 10.0;
  double confounder_prev_cap = 0.5;
  double baseline_intercept = -3.0;
  bool jitter_prevalences = false;
  /// Population draws allowed per requested record before giving up.
  double draw_budget_factor = 500.0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError when an invariant of the configuration is violated.
void validate(const SimulationConfig& config);

struct Confounder {
  double log_or = 0.0;
  std::vector<int> linked;  // 1-based risk factor indices
  double prevalence = 0.0;
};

/// The sealed answer key of one contest.
struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<int> relevant;      // 1-based, ascending
  std::map<int, double> effects;  // keyed exactly by `relevant`
  std::vector<Confounder> confounders;
  std::vector<double> prevalences;  // d entries, strictly decreasing

  int k() const { return static_cast<int>(relevant.size()); }
  int d() const { return static_cast<int>(prevalences.size()); }
  bool is_relevant(int index) const { return effects.count(index) != 0; }
};

/// Dense row-major 0/1 matrix.
struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BinaryMatrix() = default;
  BinaryMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

  std::uint8_t operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  std::uint8_t& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Contestant-facing data: x(i, j) = 1 when drug j+1 was prescribed to
/// subject i, y[i] = 1 for cases.
struct Dataset {
  BinaryMatrix x;
  std::vector<std::uint8_t> y;

  int n() const { return x.rows; }
  int d() const { return x.cols; }
  int n_cases() const;
};

/// Dataset plus the latent confounder indicators (instructor diagnostics).
struct SimulatedData {
  Dataset data;
  BinaryMatrix confounders;
};

/// Log-linear grid from prev_max down to prev_min with d points.
std::vector<double> prevalence_grid(int d, double prev_max, double prev_min);

GroundTruth draw_ground_truth(const SimulationConfig& config, Rng& rng);

/// Builds a truth from explicit effects (1-based index -> log OR), e.g. a
/// published answer key. Prevalences come from the config grid.
GroundTruth make_ground_truth(const SimulationConfig& config,
                              const std::map<int, double>& effects,
                              std::vector<Confounder> confounders = {});

/// Throws ValidationError unless `truth` fits the dimensions of `config`.
void check_consistent(const GroundTruth& truth, const SimulationConfig& config);

Dataset simulate_dataset(const GroundTruth& truth, const SimulationConfig& config, Rng& rng);
SimulatedData simulate_with_latent(const GroundTruth& truth, const SimulationConfig& config,
                                   Rng& rng);

}  // namespace contest
