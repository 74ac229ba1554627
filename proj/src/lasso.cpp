#include "contest/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "contest/errors.hpp"

namespace contest {

namespace {

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

// Dense standardized design, one row per group.
struct Problem {
  const GroupedData& data;
  Standardization st;
  std::vector<double> xs;  // groups x p
  double n = 0.0;
  int m = 0;
  int p = 0;

  double at(int g, int j) const { return xs[static_cast<std::size_t>(g) * p + j]; }
};

Problem make_problem(const GroupedData& data) {
  Problem pr{data, standardize(data), {}, data.total_trials(), data.groups(), data.p};
  pr.xs.assign(static_cast<std::size_t>(pr.m) * pr.p, 0.0);
  for (int g = 0; g < pr.m; ++g)
    for (int j = 0; j < pr.p; ++j)
      if (pr.st.scale[j] > 0.0)
        pr.xs[static_cast<std::size_t>(g) * pr.p + j] = (data.x(g, j) - pr.st.mean[j]) / pr.st.scale[j];
  return pr;
}

void predictor(const Problem& pr, double b0, const std::vector<double>& b, std::vector<double>& eta) {
  eta.assign(pr.m, b0);
  for (int g = 0; g < pr.m; ++g)
    for (int j = 0; j < pr.p; ++j)
      if (b[j] != 0.0) eta[g] += pr.at(g, j) * b[j];
}

double penalized_objective(const Problem& pr, const std::vector<double>& eta,
                           const std::vector<double>& b, double lambda) {
  double nll = 0.0;
  for (int g = 0; g < pr.m; ++g)
    nll -= pr.data.successes[g] * eta[g] - pr.data.trials[g] * softplus(eta[g]);
  double l1 = 0.0;
  for (double v : b) l1 += std::fabs(v);
  return nll / pr.n + lambda * l1;
}

// Max KKT violation, including the unpenalized intercept.
double kkt_violation(const Problem& pr, const std::vector<double>& eta, const std::vector<double>& b,
                     double lambda) {
  double g0 = 0.0;
  std::vector<double> grad(pr.p, 0.0);
  for (int g = 0; g < pr.m; ++g) {
    const double r = (pr.data.successes[g] - pr.data.trials[g] * expit(eta[g])) / pr.n;
    g0 += r;
    for (int j = 0; j < pr.p; ++j) grad[j] += r * pr.at(g, j);
  }
  double worst = std::fabs(g0);
  for (int j = 0; j < pr.p; ++j) {
    if (pr.st.scale[j] == 0.0) continue;
    const double v = b[j] != 0.0 ? std::fabs(grad[j] - lambda * (b[j] > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::fabs(grad[j]) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

struct Solution {
  double b0;
  std::vector<double> b;
  int iterations = 0;
  bool converged = false;
};

void solve(const Problem& pr, double lambda, Solution& sol, const LassoControl& control) {
  std::vector<double> eta, v(pr.m), res(pr.m), xv(pr.p);
  predictor(pr, sol.b0, sol.b, eta);
  double f = penalized_objective(pr, eta, sol.b, lambda);
  sol.converged = false;

  for (int outer = 0; outer < control.max_outer; ++outer) {
    if (kkt_violation(pr, eta, sol.b, lambda) < control.kkt_tolerance) {
      sol.converged = true;
      return;
    }
    ++sol.iterations;
    // quadratic model: weights v and working residuals res = z - eta
    for (int g = 0; g < pr.m; ++g) {
      const double mu = expit(eta[g]);
      const double w = std::max(mu * (1.0 - mu), 1e-10);
      v[g] = pr.data.trials[g] * w / pr.n;
      res[g] = (pr.data.successes[g] - pr.data.trials[g] * mu) / (pr.data.trials[g] * w);
    }
    double vsum = 0.0;
    for (double vi : v) vsum += vi;
    for (int j = 0; j < pr.p; ++j) {
      xv[j] = 0.0;
      for (int g = 0; g < pr.m; ++g) xv[j] += v[g] * pr.at(g, j) * pr.at(g, j);
    }

    double b0 = sol.b0;
    std::vector<double> b = sol.b;
    for (int sweep = 0; sweep < control.max_sweeps; ++sweep) {
      double moved = 0.0;
      double u = 0.0;
      for (int g = 0; g < pr.m; ++g) u += v[g] * res[g];
      const double d0 = u / vsum;
      if (d0 != 0.0) {
        b0 += d0;
        for (int g = 0; g < pr.m; ++g) res[g] -= d0;
        moved = std::max(moved, vsum * d0 * d0);
      }
      for (int j = 0; j < pr.p; ++j) {
        if (xv[j] <= 0.0) continue;
        double uj = 0.0;
        for (int g = 0; g < pr.m; ++g) uj += v[g] * pr.at(g, j) * res[g];
        const double bj = soft_threshold(uj + xv[j] * b[j], lambda) / xv[j];
        const double dj = bj - b[j];
        if (dj != 0.0) {
          b[j] = bj;
          for (int g = 0; g < pr.m; ++g) res[g] -= pr.at(g, j) * dj;
          moved = std::max(moved, xv[j] * dj * dj);
        }
      }
      if (moved < control.sweep_tolerance) break;
    }

    // backtrack along the proximal Newton direction
    std::vector<double> eta_new, b_try(pr.p);
    double scale = 1.0, b0_try = b0;
    double f_new = 0.0;
    for (int halving = 0; halving < 60; ++halving) {
      b0_try = sol.b0 + scale * (b0 - sol.b0);
      for (int j = 0; j < pr.p; ++j) b_try[j] = sol.b[j] + scale * (b[j] - sol.b[j]);
      predictor(pr, b0_try, b_try, eta_new);
      f_new = penalized_objective(pr, eta_new, b_try, lambda);
      if (f_new <= f + 1e-15 * std::fabs(f)) break;
      scale *= 0.5;
    }
    if (!(f_new <= f + 1e-15 * std::fabs(f))) {
      sol.converged = kkt_violation(pr, eta, sol.b, lambda) < 1e-6;
      return;
    }
    sol.b0 = b0_try;
    sol.b = b_try;
    eta = std::move(eta_new);
    f = f_new;
  }
  sol.converged = kkt_violation(pr, eta, sol.b, lambda) < control.kkt_tolerance;
}

FitResult to_fit(const Problem& pr, const Solution& sol, double lambda) {
  FitResult fit;
  fit.penalty = PenaltySpec::lasso(lambda);
  fit.coefficients.assign(pr.p + 1, 0.0);
  double b0 = sol.b0;
  for (int j = 0; j < pr.p; ++j) {
    if (sol.b[j] == 0.0) continue;
    fit.coefficients[j + 1] = sol.b[j] / pr.st.scale[j];
    b0 -= sol.b[j] * pr.st.mean[j] / pr.st.scale[j];
  }
  fit.coefficients[0] = b0;
  fit.deviance = deviance(pr.data, fit.coefficients);
  fit.converged = sol.converged;
  fit.iterations = sol.iterations;
  return fit;
}

}  // namespace

Standardization standardize(const GroupedData& data) {
  const double n = data.total_trials();
  Standardization st{std::vector<double>(data.p, 0.0), std::vector<double>(data.p, 0.0)};
  for (int g = 0; g < data.groups(); ++g)
    for (int j = 0; j < data.p; ++j) st.mean[j] += data.trials[g] * data.x(g, j);
  for (int j = 0; j < data.p; ++j) {
    st.mean[j] /= n;
    const double var = st.mean[j] * (1.0 - st.mean[j]);
    st.scale[j] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return st;
}

double lasso_lambda_max(const GroupedData& data) {
  const double n = data.total_trials();
  const double ybar = data.total_successes() / n;
  const Standardization st = standardize(data);
  double best = 0.0;
  for (int j = 0; j < data.p; ++j) {
    if (st.scale[j] == 0.0) continue;
    double s = 0.0;
    for (int g = 0; g < data.groups(); ++g)
      s += (data.x(g, j) - st.mean[j]) / st.scale[j] * (data.successes[g] - data.trials[g] * ybar);
    best = std::max(best, std::fabs(s) / n);
  }
  return best;
}

std::vector<double> lasso_lambda_grid(double lambda_max, int points, double ratio) {
  if (points < 1 || !(ratio > 0.0 && ratio < 1.0) || !(lambda_max > 0.0))
    throw ValidationError("lambda grid needs points >= 1, ratio in (0, 1), lambda_max > 0");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = points == 1 ? lambda_max
                          : lambda_max * std::pow(ratio, static_cast<double>(i) / (points - 1));
  return grid;
}

std::vector<FitResult> fit_lasso_path(const GroupedData& data, std::span<const double> lambdas,
                                      const LassoControl& control) {
  const double n = data.total_trials();
  const double cases = data.total_successes();
  if (cases <= 0.0 || cases >= n)
    throw DegenerateOutcomeError("outcome has a single class; logistic fit undefined");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0)) throw ValidationError("lasso lambdas must be non-negative");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1]))
      throw ValidationError("lasso lambda grid must be strictly decreasing");
  }

  const Problem pr = make_problem(data);
  Solution sol{logit(cases / n), std::vector<double>(pr.p, 0.0)};
  std::vector<FitResult> path;
  path.reserve(lambdas.size());
  for (double lambda : lambdas) {
    sol.iterations = 0;
    solve(pr, lambda, sol, control);
    path.push_back(to_fit(pr, sol, lambda));
  }
  return path;
}

std::vector<FitResult> fit_lasso_path(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                                      std::span<const double> lambdas, const LassoControl& control) {
  const auto cols = all_columns(x);
  return fit_lasso_path(group_rows(x, y, cols), lambdas, control);
}

std::vector<double> lasso_stationarity(const GroupedData& data, const FitResult& fit) {
  const Standardization st = standardize(data);
  const double n = data.total_trials();
  std::vector<double> r(data.p, 0.0);
  for (int g = 0; g < data.groups(); ++g) {
    double eta = fit.coefficients[0];
    for (int j = 0; j < data.p; ++j) eta += fit.coefficients[j + 1] * data.x(g, j);
    const double resid = data.successes[g] - data.trials[g] * expit(eta);
    for (int j = 0; j < data.p; ++j)
      if (st.scale[j] > 0.0) r[j] += resid * (data.x(g, j) - st.mean[j]) / st.scale[j];
  }
  for (auto& v : r) v /= n;
  return r;
}

}  // namespace contest
