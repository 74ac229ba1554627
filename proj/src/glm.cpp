#include "contest/glm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "contest/errors.hpp"

namespace contest {

double expit(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double two_sided_normal_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

namespace {

// log(1 + exp(eta))
double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double linear_predictor(const GroupedData& data, int g, std::span<const double> beta) {
  double eta = beta[0];
  for (std::uint64_t bits = data.keys[g]; bits != 0; bits &= bits - 1)
    eta += beta[1 + std::countr_zero(bits)];
  return eta;
}

double slope_norm2(std::span<const double> beta) {
  double s = 0.0;
  for (std::size_t j = 1; j < beta.size(); ++j) s += beta[j] * beta[j];
  return s;
}

}  // namespace

double GroupedData::total_trials() const { return std::accumulate(trials.begin(), trials.end(), 0.0); }

double GroupedData::total_successes() const {
  return std::accumulate(successes.begin(), successes.end(), 0.0);
}

std::vector<int> all_columns(const BinaryMatrix& x) {
  std::vector<int> cols(x.cols);
  std::iota(cols.begin(), cols.end(), 0);
  return cols;
}

GroupedData group_rows(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                       std::span<const int> columns, std::span<const int> rows) {
  if (static_cast<int>(y.size()) != x.rows)
    throw ValidationError("outcome length " + std::to_string(y.size()) + " != row count " +
                          std::to_string(x.rows));
  if (columns.size() > 64) throw ValidationError("at most 64 columns can be grouped");
  for (int c : columns)
    if (c < 0 || c >= x.cols) throw ValidationError("column " + std::to_string(c) + " out of range");

  const std::size_t n = rows.empty() ? static_cast<std::size_t>(x.rows) : rows.size();
  std::vector<std::pair<std::uint64_t, std::uint8_t>> tagged(n);
  for (std::size_t r = 0; r < n; ++r) {
    const int i = rows.empty() ? static_cast<int>(r) : rows[r];
    std::uint64_t key = 0;
    for (std::size_t b = 0; b < columns.size(); ++b)
      key |= static_cast<std::uint64_t>(x(i, columns[b]) & 1U) << b;
    tagged[r] = {key, y[i]};
  }
  std::sort(tagged.begin(), tagged.end());

  GroupedData out;
  out.p = static_cast<int>(columns.size());
  for (const auto& [key, yi] : tagged) {
    if (out.keys.empty() || out.keys.back() != key) {
      out.keys.push_back(key);
      out.trials.push_back(0.0);
      out.successes.push_back(0.0);
    }
    out.trials.back() += 1.0;
    out.successes.back() += yi ? 1.0 : 0.0;
  }
  return out;
}

double log_likelihood(const GroupedData& data, std::span<const double> beta) {
  double ll = 0.0;
  for (int g = 0; g < data.groups(); ++g) {
    const double eta = linear_predictor(data, g, beta);
    ll += data.successes[g] * eta - data.trials[g] * softplus(eta);
  }
  return ll;
}

std::vector<double> score(const GroupedData& data, std::span<const double> beta) {
  std::vector<double> grad(data.p + 1, 0.0);
  for (int g = 0; g < data.groups(); ++g) {
    const double r = data.successes[g] - data.trials[g] * expit(linear_predictor(data, g, beta));
    grad[0] += r;
    for (std::uint64_t bits = data.keys[g]; bits != 0; bits &= bits - 1)
      grad[1 + std::countr_zero(bits)] += r;
  }
  return grad;
}

namespace {

struct Newton {
  Eigen::MatrixXd hessian;  // information plus penalty
  Eigen::VectorXd gradient;  // of the penalized log-likelihood
};

Newton newton_system(const GroupedData& data, const Eigen::VectorXd& beta, double ridge) {
  const int q = data.p + 1;
  Newton sys{Eigen::MatrixXd::Zero(q, q), Eigen::VectorXd::Zero(q)};
  std::vector<int> active;
  active.reserve(q);
  for (int g = 0; g < data.groups(); ++g) {
    const double mu = expit(linear_predictor(data, g, {beta.data(), static_cast<std::size_t>(q)}));
    const double w = data.trials[g] * mu * (1.0 - mu);
    const double r = data.successes[g] - data.trials[g] * mu;
    active.assign(1, 0);
    for (std::uint64_t bits = data.keys[g]; bits != 0; bits &= bits - 1)
      active.push_back(1 + std::countr_zero(bits));
    for (int a : active) {
      sys.gradient(a) += r;
      for (int b : active) sys.hessian(a, b) += w;
    }
  }
  for (int j = 1; j < q; ++j) {
    sys.hessian(j, j) += 2.0 * ridge;
    sys.gradient(j) -= 2.0 * ridge * beta(j);
  }
  return sys;
}

double objective(const GroupedData& data, std::span<const double> beta, double ridge) {
  return -log_likelihood(data, beta) + ridge * slope_norm2(beta);
}

enum class Outcome { converged, exhausted, separated };

struct IrlsState {
  Eigen::VectorXd beta;
  int iterations = 0;
  std::vector<double> trace;
};

Outcome run_irls(const GroupedData& data, double ridge, bool watch_separation,
                 const GlmControl& control, IrlsState& st) {
  const int q = data.p + 1;
  auto view = [q](const Eigen::VectorXd& b) { return std::span<const double>(b.data(), q); };
  double f = objective(data, view(st.beta), ridge);
  st.trace.push_back(-2.0 * log_likelihood(data, view(st.beta)));

  while (st.iterations < control.max_iterations) {
    ++st.iterations;
    const Newton sys = newton_system(data, st.beta, ridge);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sys.hessian);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    const bool singular = ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-13 * std::max(dmax, 1.0);
    if (singular && watch_separation) return Outcome::separated;
    const Eigen::VectorXd step = ldlt.solve(sys.gradient);

    double scale = 1.0;
    Eigen::VectorXd candidate = st.beta + step;
    double f_new = objective(data, view(candidate), ridge);
    int halvings = 0;
    while (!(f_new <= f + 1e-12 * std::fabs(f)) && halvings < control.max_halvings) {
      scale *= 0.5;
      candidate = st.beta + scale * step;
      f_new = objective(data, view(candidate), ridge);
      ++halvings;
    }
    if (!(f_new <= f + 1e-12 * std::fabs(f))) return Outcome::converged;  // numerical floor

    st.beta = candidate;
    st.trace.push_back(-2.0 * log_likelihood(data, view(st.beta)));
    if (watch_separation && st.beta.cwiseAbs().maxCoeff() > control.separation_threshold)
      return Outcome::separated;
    const double change = std::fabs(f - f_new) / (std::fabs(f_new) + 0.1);
    f = f_new;
    if (change < control.tolerance) return Outcome::converged;
  }
  return Outcome::exhausted;
}

}  // namespace

FitResult fit_logistic(const GroupedData& data, const PenaltySpec& penalty,
                       const GlmControl& control) {
  if (penalty.kind == PenaltyKind::lasso && penalty.lambda > 0.0)
    throw UnsupportedFitError("fit_logistic handles none/ridge; use fit_lasso_path for lasso");
  if (!(penalty.lambda >= 0.0)) throw ValidationError("penalty lambda must be >= 0");
  const double n = data.total_trials();
  const double cases = data.total_successes();
  if (cases <= 0.0 || cases >= n)
    throw DegenerateOutcomeError("outcome has a single class; logistic fit undefined");
  if (!(n > data.p)) throw ValidationError("need more observations than covariates");

  const int q = data.p + 1;
  const double requested = penalty.kind == PenaltyKind::ridge ? penalty.lambda : 0.0;
  auto start = [&] {
    IrlsState st;
    st.beta = Eigen::VectorXd::Zero(q);
    st.beta(0) = logit((cases + 0.5) / (n + 1.0));
    return st;
  };

  FitResult out;
  out.penalty = penalty;
  double ridge = requested;
  IrlsState st = start();
  Outcome outcome = run_irls(data, ridge, requested < control.fallback_ridge, control, st);
  if (outcome == Outcome::separated) {
    out.separation_flag = true;
    ridge = control.fallback_ridge;
    st = start();
    outcome = run_irls(data, ridge, false, control, st);
  }

  out.coefficients.assign(st.beta.data(), st.beta.data() + q);
  out.iterations = st.iterations;
  out.converged = outcome == Outcome::converged;
  out.deviance = -2.0 * log_likelihood(data, out.coefficients);
  out.deviance_trace = std::move(st.trace);

  if (penalty.kind != PenaltyKind::ridge || penalty.lambda == 0.0) {
    if (out.converged) {
      const Newton sys = newton_system(data, st.beta, ridge);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(sys.hessian);
      const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(q, q));
      std::vector<double> se(q);
      for (int j = 0; j < q; ++j) se[j] = std::sqrt(std::max(cov(j, j), 0.0));
      out.std_errors = std::move(se);
    }
  }
  return out;
}

FitResult fit_logistic(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                       const PenaltySpec& penalty, const GlmControl& control) {
  const auto cols = all_columns(x);
  return fit_logistic(group_rows(x, y, cols), penalty, control);
}

std::vector<double> wald_pvalues(const FitResult& fit) {
  if (!fit.std_errors)
    throw UnsupportedFitError("Wald p-values need a converged unpenalized fit with standard errors");
  const auto& se = *fit.std_errors;
  std::vector<double> p(fit.n_slopes());
  for (int j = 1; j <= fit.n_slopes(); ++j) {
    const double b = fit.coefficients[j];
    p[j - 1] = b == 0.0 ? 1.0 : two_sided_normal_p(b / se[j]);
  }
  return p;
}

std::vector<int> CvPlan::training_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(assignments.size()); ++i)
    if (assignments[i] != fold) rows.push_back(i);
  return rows;
}

std::vector<int> CvPlan::test_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(assignments.size()); ++i)
    if (assignments[i] == fold) rows.push_back(i);
  return rows;
}

CvPlan make_folds(std::span<const std::uint8_t> y, int n_folds, Rng& rng) {
  if (n_folds < 2) throw StratificationError("need at least 2 folds");
  std::vector<int> cases, controls;
  for (int i = 0; i < static_cast<int>(y.size()); ++i) (y[i] ? cases : controls).push_back(i);
  if (static_cast<int>(cases.size()) < n_folds || static_cast<int>(controls.size()) < n_folds)
    throw StratificationError("each class needs at least " + std::to_string(n_folds) +
                              " members for stratified folds (cases " +
                              std::to_string(cases.size()) + ", controls " +
                              std::to_string(controls.size()) + ")");
  rng.shuffle(cases);
  rng.shuffle(controls);

  CvPlan plan;
  plan.n_folds = n_folds;
  plan.stratified = true;
  plan.assignments.assign(y.size(), 0);
  int next = 0;
  for (int i : cases) plan.assignments[i] = next++ % n_folds;
  for (int i : controls) plan.assignments[i] = next++ % n_folds;
  return plan;
}

std::vector<double> cv_fold_deviances(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                                      std::span<const int> columns, const CvPlan& plan,
                                      const PenaltySpec& penalty, const GlmControl& control) {
  if (static_cast<int>(plan.assignments.size()) != x.rows || static_cast<int>(y.size()) != x.rows)
    throw ValidationError("cv plan does not match the data");
  std::vector<double> out(plan.n_folds);
  for (int f = 0; f < plan.n_folds; ++f) {
    const auto train = plan.training_rows(f);
    const auto test = plan.test_rows(f);
    const FitResult fit = fit_logistic(group_rows(x, y, columns, train), penalty, control);
    out[f] = deviance(group_rows(x, y, columns, test), fit.coefficients);
  }
  return out;
}

double cv_deviance(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                   std::span<const int> columns, const CvPlan& plan, const PenaltySpec& penalty,
                   const GlmControl& control) {
  const auto per_fold = cv_fold_deviances(x, y, columns, plan, penalty, control);
  return std::accumulate(per_fold.begin(), per_fold.end(), 0.0) / x.rows;
}

std::vector<int> bootstrap_resample(int n, Rng& rng) {
  if (n < 1) throw ValidationError("bootstrap needs n >= 1");
  std::vector<int> idx(n);
  for (auto& i : idx) i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return idx;
}

}  // namespace contest
