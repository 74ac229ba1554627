#include "contest/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "contest/errors.hpp"

namespace contest {

namespace {

double expit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid simulation config: " + what);
}

}  // namespace

int Dataset::n_cases() const {
  return static_cast<int>(std::count(y.begin(), y.end(), std::uint8_t{1}));
}

void validate(const SimulationConfig& c) {
  require(c.d >= 2 && c.d <= 64, "d must be in [2, 64]");
  require(c.prev_min > 0.0 && c.prev_min < c.prev_max && c.prev_max < 1.0,
          "need 0 < prev_min < prev_max < 1");
  require(c.k_min >= 1 && c.k_min <= c.k_max && c.k_max <= c.d, "need 1 <= k_min <= k_max <= d");
  require(c.effect_lo > 0.0 && c.effect_lo <= c.effect_hi, "need 0 < effect_lo <= effect_hi");
  require(c.n_cases > 0 && c.n_controls > 0, "case and control counts must be positive");
  require(c.n_confounders >= 0 && c.confounder_links >= 0, "confounder counts must be >= 0");
  require(c.confounder_prev >= 0.0 && c.confounder_prev <= 1.0, "confounder_prev must be in [0, 1]");
  require(c.confounder_boost >= 1.0, "confounder_boost must be >= 1");
  require(c.confounder_prev_cap > 0.0 && c.confounder_prev_cap <= 1.0,
          "confounder_prev_cap must be in (0, 1]");
  require(std::isfinite(c.baseline_intercept), "baseline_intercept must be finite");
  require(c.draw_budget_factor >= 1.0, "draw_budget_factor must be >= 1");
}

std::vector<double> prevalence_grid(int d, double prev_max, double prev_min) {
  if (d < 2) throw ConfigError("prevalence grid needs d >= 2");
  if (!(prev_min > 0.0 && prev_min < prev_max && prev_max < 1.0))
    throw ConfigError("prevalence grid needs 0 < prev_min < prev_max < 1");
  std::vector<double> grid(d);
  const double log_hi = std::log(prev_max);
  const double step = (std::log(prev_min) - log_hi) / (d - 1);
  for (int j = 0; j < d; ++j) grid[j] = std::exp(log_hi + step * j);
  grid.front() = prev_max;
  grid.back() = prev_min;
  return grid;
}

namespace {

std::vector<double> draw_prevalences(const SimulationConfig& c, Rng& rng) {
  if (!c.jitter_prevalences) return prevalence_grid(c.d, c.prev_max, c.prev_min);
  const double lo = std::log(c.prev_min), hi = std::log(c.prev_max);
  std::vector<double> p(c.d);
  for (;;) {
    for (auto& v : p) v = std::exp(rng.uniform(lo, hi));
    std::sort(p.begin(), p.end(), std::greater<>());
    if (std::adjacent_find(p.begin(), p.end()) == p.end()) return p;
  }
}

double draw_effect(const SimulationConfig& c, Rng& rng) {
  const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return sign * rng.uniform(c.effect_lo, c.effect_hi);
}

}  // namespace

GroundTruth draw_ground_truth(const SimulationConfig& config, Rng& rng) {
  validate(config);
  GroundTruth truth;
  truth.seed = config.seed;

  const int k = config.k_min + static_cast<int>(rng.below(config.k_max - config.k_min + 1));
  std::vector<int> pool(config.d);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(config.d - i));
    std::swap(pool[i], pool[j]);
  }
  truth.relevant.assign(pool.begin(), pool.begin() + k);
  std::sort(truth.relevant.begin(), truth.relevant.end());
  for (int index : truth.relevant) truth.effects[index] = draw_effect(config, rng);

  // confounders link to distinct non-relevant factors
  std::vector<int> spare(pool.begin() + k, pool.end());
  std::size_t next_spare = 0;
  for (int c = 0; c < config.n_confounders; ++c) {
    Confounder conf;
    conf.log_or = draw_effect(config, rng);
    conf.prevalence = config.confounder_prev;
    for (int l = 0; l < config.confounder_links && next_spare < spare.size(); ++l) {
      const auto j = next_spare + static_cast<std::size_t>(rng.below(spare.size() - next_spare));
      std::swap(spare[next_spare], spare[j]);
      conf.linked.push_back(spare[next_spare++]);
    }
    std::sort(conf.linked.begin(), conf.linked.end());
    truth.confounders.push_back(std::move(conf));
  }

  truth.prevalences = draw_prevalences(config, rng);
  return truth;
}

GroundTruth make_ground_truth(const SimulationConfig& config, const std::map<int, double>& effects,
                              std::vector<Confounder> confounders) {
  if (config.d < 2) throw ConfigError("make_ground_truth needs d >= 2");
  GroundTruth truth;
  truth.seed = config.seed;
  truth.effects = effects;
  for (const auto& [index, effect] : effects) {
    if (index < 1 || index > config.d)
      throw ValidationError("relevant index " + std::to_string(index) + " outside 1.." +
                            std::to_string(config.d));
    truth.relevant.push_back(index);
  }
  truth.confounders = std::move(confounders);
  truth.prevalences = prevalence_grid(config.d, config.prev_max, config.prev_min);
  return truth;
}

void check_consistent(const GroundTruth& truth, const SimulationConfig& config) {
  if (truth.d() != config.d)
    throw ValidationError("truth has " + std::to_string(truth.d()) + " prevalences, config d = " +
                          std::to_string(config.d));
  if (truth.relevant.size() != truth.effects.size())
    throw ValidationError("truth effects must be keyed exactly by the relevant set");
  for (int index : truth.relevant)
    if (index < 1 || index > config.d || !truth.is_relevant(index))
      throw ValidationError("truth relevant index " + std::to_string(index) + " invalid");
  for (double p : truth.prevalences)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("truth prevalence outside [0, 1]");
  for (const auto& conf : truth.confounders) {
    if (!(conf.prevalence >= 0.0 && conf.prevalence <= 1.0))
      throw ValidationError("confounder prevalence outside [0, 1]");
    for (int index : conf.linked)
      if (index < 1 || index > config.d)
        throw ValidationError("confounder link " + std::to_string(index) + " outside 1..d");
  }
}

SimulatedData simulate_with_latent(const GroundTruth& truth, const SimulationConfig& config,
                                   Rng& rng) {
  validate(config);
  check_consistent(truth, config);
  const int d = config.d;
  const int n = config.n_cases + config.n_controls;
  const int n_conf = static_cast<int>(truth.confounders.size());

  std::vector<double> slope(d, 0.0);
  for (const auto& [index, effect] : truth.effects) slope[index - 1] = effect;

  // boosted prevalence per (confounder, factor); factors linked to several
  // active confounders take the largest boost
  std::vector<double> boosted(truth.prevalences);
  for (int j = 0; j < d; ++j)
    boosted[j] = std::min(truth.prevalences[j] * config.confounder_boost,
                          std::max(config.confounder_prev_cap, truth.prevalences[j]));

  std::vector<std::uint8_t> cases_x, controls_x, cases_c, controls_c;
  cases_x.reserve(static_cast<std::size_t>(config.n_cases) * d);
  controls_x.reserve(static_cast<std::size_t>(config.n_controls) * d);
  int n_case = 0, n_control = 0;

  std::vector<std::uint8_t> row(d), latent(n_conf), linked_active(d);
  const auto budget = static_cast<std::uint64_t>(config.draw_budget_factor * n);
  std::uint64_t draws = 0;
  while (n_case < config.n_cases || n_control < config.n_controls) {
    if (draws++ >= budget)
      throw SimulationBudgetError(
          "case-control pools not filled after " + std::to_string(budget) +
          " population draws (cases " + std::to_string(n_case) + "/" +
          std::to_string(config.n_cases) + ", controls " + std::to_string(n_control) + "/" +
          std::to_string(config.n_controls) +
          "); move baseline_intercept toward 0 or raise draw_budget_factor");

    double eta = config.baseline_intercept;
    std::fill(linked_active.begin(), linked_active.end(), 0);
    for (int c = 0; c < n_conf; ++c) {
      const auto& conf = truth.confounders[c];
      latent[c] = rng.bernoulli(conf.prevalence) ? 1 : 0;
      if (latent[c]) {
        eta += conf.log_or;
        for (int index : conf.linked) linked_active[index - 1] = 1;
      }
    }
    for (int j = 0; j < d; ++j) {
      const double p = linked_active[j] ? boosted[j] : truth.prevalences[j];
      row[j] = rng.bernoulli(p) ? 1 : 0;
      if (row[j]) eta += slope[j];
    }
    const bool is_case = rng.bernoulli(expit(eta));
    if (is_case && n_case < config.n_cases) {
      cases_x.insert(cases_x.end(), row.begin(), row.end());
      cases_c.insert(cases_c.end(), latent.begin(), latent.end());
      ++n_case;
    } else if (!is_case && n_control < config.n_controls) {
      controls_x.insert(controls_x.end(), row.begin(), row.end());
      controls_c.insert(controls_c.end(), latent.begin(), latent.end());
      ++n_control;
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  SimulatedData out;
  out.data.x = BinaryMatrix(n, d);
  out.data.y.resize(n);
  out.confounders = BinaryMatrix(n, n_conf);
  for (int i = 0; i < n; ++i) {
    const int src = order[i];
    const bool is_case = src < config.n_cases;
    const int r = is_case ? src : src - config.n_cases;
    const auto& xs = is_case ? cases_x : controls_x;
    const auto& cs = is_case ? cases_c : controls_c;
    std::copy_n(xs.begin() + static_cast<std::ptrdiff_t>(r) * d, d,
                out.data.x.data.begin() + static_cast<std::ptrdiff_t>(i) * d);
    std::copy_n(cs.begin() + static_cast<std::ptrdiff_t>(r) * n_conf, n_conf,
                out.confounders.data.begin() + static_cast<std::ptrdiff_t>(i) * n_conf);
    out.data.y[i] = is_case ? 1 : 0;
  }
  return out;
}

Dataset simulate_dataset(const GroundTruth& truth, const SimulationConfig& config, Rng& rng) {
  return simulate_with_latent(truth, config, rng).data;
}

}  // namespace contest
