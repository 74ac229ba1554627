#include "contest/selectors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "contest/errors.hpp"
#include "contest/lasso.hpp"

namespace contest {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::team_a, "team_a"},
    {Method::team_b, "team_b"},
    {Method::team_c, "team_c"},
    {Method::team_d, "team_d"},
    {Method::random_baseline, "random_baseline"},
    {Method::full_baseline, "full_baseline"},
    {Method::empty_baseline, "empty_baseline"},
}};

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string index_list(const std::vector<int>& columns) {
  std::string s = "{";
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + std::to_string(columns[i] + 1);
  return s + "}";
}

std::vector<int> to_variables(std::vector<int> columns) {
  for (auto& c : columns) ++c;
  std::sort(columns.begin(), columns.end());
  return columns;
}

void check_sizes(const SelectorSpec& s, int d) {
  if (!(s.min_size >= 0 && s.min_size <= s.max_size && s.max_size <= d))
    throw ConfigError("need 0 <= min_size <= max_size <= d");
}

}  // namespace

std::string_view method_name(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  throw ValidationError("unknown method '" + std::string(name) +
                        "' (expected team_a, team_b, team_c, team_d, random_baseline, "
                        "full_baseline or empty_baseline)");
}

void validate(const SelectorSpec& s, int d) {
  switch (s.method) {
    case Method::team_a:
      check_sizes(s, d);
      if (s.max_size < 1) throw ConfigError("team_a needs max_size >= 1");
      if (!(s.train_fraction > 0.0 && s.train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0, 1)");
      break;
    case Method::team_b:
      if (s.max_select < 0) throw ConfigError("max_select must be >= 0");
      if (s.lasso_folds < 2) throw ConfigError("lasso_folds must be >= 2");
      if (s.lambda_points < 2 || !(s.lambda_ratio > 0.0 && s.lambda_ratio < 1.0))
        throw ConfigError("need lambda_points >= 2 and lambda_ratio in (0, 1)");
      if (s.ridge_points < 1) throw ConfigError("ridge_points must be >= 1");
      break;
    case Method::team_c:
      check_sizes(s, d);
      if (s.max_size > 16) throw ConfigError("team_c supports max_size <= 16");
      if (s.cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
      break;
    case Method::team_d:
      if (s.n_resamples < 1) throw ConfigError("n_resamples must be >= 1");
      if (!(s.threshold > 0.0 && s.threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
      if (s.max_d_select < 0) throw ConfigError("max_d_select must be >= 0");
      break;
    case Method::random_baseline:
      check_sizes(s, d);
      break;
    case Method::full_baseline:
    case Method::empty_baseline:
      break;
  }
  if (s.threads < 0) throw ConfigError("threads must be >= 0");
}

// ---------------------------------------------------------------- team A

Submission select_team_a(const Dataset& data, const SelectorSpec& spec) {
  validate(spec, data.d());
  Rng rng(spec.seed);
  std::vector<int> cases, controls;
  for (int i = 0; i < data.n(); ++i) (data.y[i] ? cases : controls).push_back(i);
  rng.shuffle(cases);
  rng.shuffle(controls);
  const auto cut = [&](std::size_t m) {
    return static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(m)));
  };
  std::vector<int> train, test;
  for (const auto* pool : {&cases, &controls}) {
    const std::size_t c = cut(pool->size());
    train.insert(train.end(), pool->begin(), pool->begin() + static_cast<std::ptrdiff_t>(c));
    test.insert(test.end(), pool->begin() + static_cast<std::ptrdiff_t>(c), pool->end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  std::ostringstream log;
  log << "team_a: stratified split train=" << train.size() << " test=" << test.size()
      << "; greedy forward selection on training deviance\n";

  std::vector<int> current;
  std::vector<int> best_columns;
  double best_test = INFINITY;
  for (int size = 1; size <= spec.max_size; ++size) {
    int best_j = -1;
    double best_train = INFINITY;
    for (int j = 0; j < data.d(); ++j) {
      if (std::find(current.begin(), current.end(), j) != current.end()) continue;
      auto cols = current;
      cols.insert(std::upper_bound(cols.begin(), cols.end(), j), j);
      const FitResult fit = fit_logistic(group_rows(data.x, data.y, cols, train), {}, spec.glm);
      if (fit.deviance < best_train) {
        best_train = fit.deviance;
        best_j = j;
      }
    }
    current.insert(std::upper_bound(current.begin(), current.end(), best_j), best_j);
    if (size < spec.min_size) continue;

    const FitResult fit = fit_logistic(group_rows(data.x, data.y, current, train), {}, spec.glm);
    const double test_dev = deviance(group_rows(data.x, data.y, current, test), fit.coefficients);
    log << "  size " << size << " " << index_list(current) << " train_dev=" << num(best_train)
        << " test_dev=" << num(test_dev) << (fit.separation_flag ? " [separation]" : "") << "\n";
    if (test_dev < best_test) {
      best_test = test_dev;
      best_columns = current;
    }
  }
  log << "chosen " << index_list(best_columns) << " test_dev=" << num(best_test) << "\n";
  return {"team_a", to_variables(best_columns), log.str()};
}

// ---------------------------------------------------------------- team B

Submission select_team_b(const Dataset& data, const SelectorSpec& spec) {
  validate(spec, data.d());
  Rng rng(spec.seed);
  const auto cols = all_columns(data.x);
  const GroupedData full = group_rows(data.x, data.y, cols);
  const double lmax = lasso_lambda_max(full);
  std::ostringstream log;
  log << "team_b: lasso path (" << spec.lambda_points << " lambdas), " << spec.lasso_folds
      << "-fold CV, one-standard-error rule, cap " << spec.max_select << "\n";

  std::vector<int> chosen;
  if (lmax > 0.0) {
    const auto grid = lasso_lambda_grid(lmax, spec.lambda_points, spec.lambda_ratio);
    const auto path = fit_lasso_path(full, grid);
    const CvPlan plan = make_folds(data.y, spec.lasso_folds, rng);

    const std::size_t L = grid.size();
    std::vector<std::vector<double>> fold_mean(plan.n_folds, std::vector<double>(L));
    std::vector<double> cv(L, 0.0);
    for (int f = 0; f < plan.n_folds; ++f) {
      const auto train_rows = plan.training_rows(f);
      const auto test_rows = plan.test_rows(f);
      const GroupedData train = group_rows(data.x, data.y, cols, train_rows);
      const GroupedData test = group_rows(data.x, data.y, cols, test_rows);
      const auto fold_path = fit_lasso_path(train, grid);
      for (std::size_t l = 0; l < L; ++l) {
        const double dev = deviance(test, fold_path[l].coefficients);
        cv[l] += dev;
        fold_mean[f][l] = dev / static_cast<double>(test_rows.size());
      }
    }
    std::vector<double> se(L);
    for (std::size_t l = 0; l < L; ++l) {
      cv[l] /= data.n();
      double mean = 0.0, ss = 0.0;
      for (int f = 0; f < plan.n_folds; ++f) mean += fold_mean[f][l];
      mean /= plan.n_folds;
      for (int f = 0; f < plan.n_folds; ++f) ss += (fold_mean[f][l] - mean) * (fold_mean[f][l] - mean);
      se[l] = std::sqrt(ss / (plan.n_folds - 1) / plan.n_folds);
    }
    const std::size_t l_min = static_cast<std::size_t>(std::min_element(cv.begin(), cv.end()) - cv.begin());
    std::size_t l_1se = l_min;
    for (std::size_t l = 0; l <= l_min; ++l)
      if (cv[l] <= cv[l_min] + se[l_min]) {
        l_1se = l;
        break;
      }
    log << "lambda_max=" << num(lmax) << " lambda_min=" << num(grid[l_min])
        << " lambda_1se=" << num(grid[l_1se]) << "\n";
    log << "cv curve (lambda, nonzero, cv_deviance, se):\n";
    for (std::size_t l = 0; l < L; ++l) {
      int nz = 0;
      for (int j = 1; j <= path[l].n_slopes(); ++j) nz += path[l].coefficients[j] != 0.0;
      log << "  " << num(grid[l]) << " " << nz << " " << num(cv[l]) << " " << num(se[l]) << "\n";
    }

    const FitResult& at = path[l_1se];
    std::vector<int> nonzero;
    for (int j = 0; j < data.d(); ++j)
      if (at.coefficients[j + 1] != 0.0) nonzero.push_back(j);
    std::stable_sort(nonzero.begin(), nonzero.end(), [&](int a, int b) {
      return std::fabs(at.coefficients[a + 1]) > std::fabs(at.coefficients[b + 1]);
    });
    if (static_cast<int>(nonzero.size()) > spec.max_select) nonzero.resize(spec.max_select);
    chosen = nonzero;
    log << "nonzero at lambda_1se, by |log OR|:";
    for (int j : nonzero) log << " " << j + 1 << "(" << num(at.coefficients[j + 1], "%.3f") << ")";
    log << "\n";

    // ridge evidence; does not alter the selection
    std::vector<double> ridge_grid(spec.ridge_points);
    for (int i = 0; i < spec.ridge_points; ++i)
      ridge_grid[i] = spec.ridge_points == 1
                          ? 1.0
                          : std::pow(10.0, 3.0 - 5.0 * i / (spec.ridge_points - 1.0));
    double best_ridge = ridge_grid.front(), best_ridge_cv = INFINITY;
    log << "ridge cv (lambda, cv_deviance):\n";
    for (double lambda : ridge_grid) {
      const double dev = cv_deviance(data.x, data.y, cols, plan, PenaltySpec::ridge(lambda), spec.glm);
      log << "  " << num(lambda) << " " << num(dev) << "\n";
      if (dev < best_ridge_cv) {
        best_ridge_cv = dev;
        best_ridge = lambda;
      }
    }
    const FitResult ridge = fit_logistic(full, PenaltySpec::ridge(best_ridge), spec.glm);
    log << "ridge log OR at lambda " << num(best_ridge) << ":";
    for (int j = 1; j <= ridge.n_slopes(); ++j) log << " " << j << ":" << num(ridge.coefficients[j], "%.3f");
    log << "\n";
  } else {
    log << "lambda_max = 0: no variable associated with the outcome\n";
  }

  log << "exposed counts (variable, cases, controls):\n";
  for (int j = 0; j < data.d(); ++j) {
    int in_cases = 0, in_controls = 0;
    for (int i = 0; i < data.n(); ++i)
      if (data.x(i, j)) (data.y[i] ? in_cases : in_controls)++;
    log << "  " << j + 1 << " " << in_cases << " " << in_controls << "\n";
  }
  return {"team_b", to_variables(chosen), log.str()};
}

// ---------------------------------------------------------------- team C

bool subset_precedes(double dev_a, const std::vector<int>& a, double dev_b, const std::vector<int>& b) {
  if (dev_a != dev_b) return dev_a < dev_b;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::uint64_t count_subsets(int d, int min_size, int max_size) {
  std::uint64_t total = 0;
  for (int s = std::max(min_size, 0); s <= std::min(max_size, d); ++s) {
    std::uint64_t c = 1;
    for (int i = 1; i <= s; ++i) c = c * static_cast<std::uint64_t>(d - s + i) / i;
    total += c;
  }
  return total;
}

namespace {

// Observations collapsed to (row pattern, fold, outcome) with counts.
struct PatternTable {
  std::vector<std::uint64_t> mask;
  std::vector<int> fold;
  std::vector<int> y;
  std::vector<double> count;
};

PatternTable build_patterns(const Dataset& data, const CvPlan& plan) {
  std::map<std::tuple<std::uint64_t, int, int>, double> counts;
  for (int i = 0; i < data.n(); ++i) {
    std::uint64_t m = 0;
    for (int j = 0; j < data.d(); ++j) m |= static_cast<std::uint64_t>(data.x(i, j) & 1U) << j;
    counts[{m, plan.assignments[i], data.y[i]}] += 1.0;
  }
  PatternTable t;
  for (const auto& [key, c] : counts) {
    t.mask.push_back(std::get<0>(key));
    t.fold.push_back(std::get<1>(key));
    t.y.push_back(std::get<2>(key));
    t.count.push_back(c);
  }
  return t;
}

struct Candidate {
  double dev = INFINITY;
  std::vector<int> columns;
};

bool better(const Candidate& a, const Candidate& b) {
  return subset_precedes(a.dev, a.columns, b.dev, b.columns);
}

// Scores subsets against a shared pattern table. Produces the same grouped
// data, in the same order, as cv_deviance on the raw rows.
class SubsetScorer {
 public:
  SubsetScorer(const PatternTable& t, int folds, int max_size, double n, const GlmControl& control)
      : t_(t), folds_(folds), n_(n), control_(control),
        cell_(static_cast<std::size_t>(folds) * 2 << max_size, 0.0),
        seen_(std::size_t{1} << max_size, 0) {}

  double operator()(const std::vector<int>& columns) {
    touched_.clear();
    for (std::size_t r = 0; r < t_.mask.size(); ++r) {
      std::uint64_t key = 0;
      for (std::size_t b = 0; b < columns.size(); ++b) key |= ((t_.mask[r] >> columns[b]) & 1U) << b;
      if (!seen_[key]) {
        seen_[key] = 1;
        touched_.push_back(key);
      }
      cell_[(key * folds_ + t_.fold[r]) * 2 + t_.y[r]] += t_.count[r];
    }
    std::sort(touched_.begin(), touched_.end());

    double total = 0.0;
    for (int f = 0; f < folds_; ++f) {
      GroupedData train, test;
      train.p = test.p = static_cast<int>(columns.size());
      for (std::uint64_t key : touched_) {
        double tr_n = 0.0, tr_s = 0.0;
        for (int g = 0; g < folds_; ++g) {
          if (g == f) continue;
          const double* c = &cell_[(key * folds_ + g) * 2];
          tr_n += c[0] + c[1];
          tr_s += c[1];
        }
        if (tr_n > 0.0) {
          train.keys.push_back(key);
          train.trials.push_back(tr_n);
          train.successes.push_back(tr_s);
        }
        const double* c = &cell_[(key * folds_ + f) * 2];
        if (c[0] + c[1] > 0.0) {
          test.keys.push_back(key);
          test.trials.push_back(c[0] + c[1]);
          test.successes.push_back(c[1]);
        }
      }
      const FitResult fit = fit_logistic(train, {}, control_);
      total += deviance(test, fit.coefficients);
    }
    for (std::uint64_t key : touched_) {
      seen_[key] = 0;
      std::fill_n(cell_.begin() + static_cast<std::ptrdiff_t>(key * folds_ * 2), folds_ * 2, 0.0);
    }
    return total / n_;
  }

 private:
  const PatternTable& t_;
  int folds_;
  double n_;
  GlmControl control_;
  std::vector<double> cell_;  // [key][fold][y]
  std::vector<char> seen_;
  std::vector<std::uint64_t> touched_;
};

// Advances `comb` to the next lexicographic combination of {0..d-1}.
bool next_combination(std::vector<int>& comb, int d) {
  const int s = static_cast<int>(comb.size());
  int i = s - 1;
  while (i >= 0 && comb[i] == d - s + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

}  // namespace

TeamCResult run_team_c(const Dataset& data, const SelectorSpec& spec) {
  validate(spec, data.d());
  const int d = data.d();
  const std::uint64_t total = count_subsets(d, spec.min_size, spec.max_size);
  if (total > spec.budget)
    throw EnumerationBudgetError(std::to_string(total) + " subsets of sizes " +
                                 std::to_string(spec.min_size) + ".." +
                                 std::to_string(spec.max_size) + " exceed the budget of " +
                                 std::to_string(spec.budget));
  Rng rng(spec.seed);
  const CvPlan plan = make_folds(data.y, spec.cv_folds, rng);
  const PatternTable table = build_patterns(data, plan);

  std::vector<std::vector<int>> subsets;
  subsets.reserve(total);
  for (int s = spec.min_size; s <= spec.max_size; ++s) {
    std::vector<int> comb(s);
    std::iota(comb.begin(), comb.end(), 0);
    do subsets.push_back(comb);
    while (next_combination(comb, d));
  }

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(subsets.size(), 1)));
  std::vector<Candidate> best(workers);
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned w) {
    try {
      SubsetScorer scorer(table, plan.n_folds, spec.max_size, data.n(), spec.glm);
      for (std::size_t i = w; i < subsets.size(); i += workers) {
        Candidate c{scorer(subsets[i]), subsets[i]};
        if (better(c, best[w])) best[w] = std::move(c);
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);
  Candidate winner;
  for (const auto& c : best)
    if (better(c, winner)) winner = c;

  std::ostringstream log;
  log << "team_c: exhaustive search over " << subsets.size() << " subsets of sizes "
      << spec.min_size << ".." << spec.max_size << ", " << spec.cv_folds
      << "-fold CV deviance with shared folds\n";
  log << "best " << index_list(winner.columns) << " cv_deviance=" << num(winner.dev, "%.10g") << "\n";

  TeamCResult out;
  out.submission = {"team_c", to_variables(winner.columns), log.str()};
  out.evaluated = subsets.size();
  out.best_cv_deviance = winner.dev;
  return out;
}

Submission select_team_c(const Dataset& data, const SelectorSpec& spec) {
  return run_team_c(data, spec).submission;
}

// ---------------------------------------------------------------- team D

TeamDResult run_team_d(const Dataset& data, const SelectorSpec& spec) {
  validate(spec, data.d());
  Rng rng(spec.seed);
  const auto cols = all_columns(data.x);
  const int d = data.d();

  TeamDResult out;
  int separated = 0;
  for (int r = 0; r < spec.n_resamples; ++r) {
    const auto idx = bootstrap_resample(data.n(), rng);
    const FitResult fit = fit_logistic(group_rows(data.x, data.y, cols, idx), {}, spec.glm);
    separated += fit.separation_flag;
    if (!fit.std_errors)
      throw UnsupportedFitError("resample " + std::to_string(r + 1) + ": fit did not converge");
    out.pvalues.push_back(wald_pvalues(fit));
  }

  out.medians.resize(d);
  std::vector<double> column(spec.n_resamples);
  for (int j = 0; j < d; ++j) {
    for (int r = 0; r < spec.n_resamples; ++r) column[r] = out.pvalues[r][j];
    std::sort(column.begin(), column.end());
    const int m = spec.n_resamples;
    out.medians[j] = m % 2 ? column[m / 2] : 0.5 * (column[m / 2 - 1] + column[m / 2]);
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return out.medians[a] < out.medians[b]; });
  std::vector<int> chosen;
  for (int j : order)
    if (out.medians[j] < spec.threshold && static_cast<int>(chosen.size()) < spec.max_d_select)
      chosen.push_back(j);

  std::ostringstream log;
  log << "team_d: " << spec.n_resamples << " bootstrap resamples, full model Wald p-values, "
      << "select median p < " << num(spec.threshold) << " (cap " << spec.max_d_select << "); "
      << separated << " resample fits needed the separation fallback\n";
  log << "variables by median p:";
  for (int j : order) log << " " << j + 1 << "(" << num(out.medians[j], "%.4g") << ")";
  log << "\npvalue table (rows = resamples, columns = x1..x" << d << "):\n";
  for (const auto& row : out.pvalues) {
    for (int j = 0; j < d; ++j) log << (j ? "," : "") << num(row[j], "%.6g");
    log << "\n";
  }
  out.submission = {"team_d", to_variables(chosen), log.str()};
  return out;
}

Submission select_team_d(const Dataset& data, const SelectorSpec& spec) {
  return run_team_d(data, spec).submission;
}

// ---------------------------------------------------------------- baselines

Submission select_baseline(const Dataset& data, const SelectorSpec& spec) {
  validate(spec, data.d());
  const int d = data.d();
  Submission s;
  s.team = std::string(method_name(spec.method));
  switch (spec.method) {
    case Method::random_baseline: {
      Rng rng(spec.seed);
      const int size = spec.min_size + static_cast<int>(rng.below(spec.max_size - spec.min_size + 1));
      std::vector<int> pool(d);
      std::iota(pool.begin(), pool.end(), 1);
      for (int i = 0; i < size; ++i) std::swap(pool[i], pool[i + static_cast<int>(rng.below(d - i))]);
      s.selected.assign(pool.begin(), pool.begin() + size);
      std::sort(s.selected.begin(), s.selected.end());
      s.method_report = "random_baseline: uniform subset of size " + std::to_string(size) + "\n";
      break;
    }
    case Method::full_baseline:
      s.selected.resize(d);
      std::iota(s.selected.begin(), s.selected.end(), 1);
      s.method_report = "full_baseline: every variable\n";
      break;
    case Method::empty_baseline:
      s.method_report = "empty_baseline: no variable\n";
      break;
    default:
      throw ConfigError("select_baseline called with a team method");
  }
  return s;
}

Submission select(const Dataset& data, const SelectorSpec& spec) {
  switch (spec.method) {
    case Method::team_a: return select_team_a(data, spec);
    case Method::team_b: return select_team_b(data, spec);
    case Method::team_c: return select_team_c(data, spec);
    case Method::team_d: return select_team_d(data, spec);
    default: return select_baseline(data, spec);
  }
}

}  // namespace contest
