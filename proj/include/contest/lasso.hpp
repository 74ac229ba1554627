#pragma once

#include <span>
#include <vector>

#include "contest/glm.hpp"

namespace contest {

struct LassoControl {
  double kkt_tolerance = 1e-9;
  int max_outer = 200;
  int max_sweeps = 100000;
  double sweep_tolerance = 1e-18;  // weighted squared coordinate change
};

/// Column centering/scaling used by the lasso. A column without variance
/// has scale 0 and is held at zero.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;
};

Standardization standardize(const GroupedData& data);

/// Smallest lambda at which every slope of the lasso solution is zero:
/// max_j |(1/n) sum_i xstd_ij (y_i - ybar)|.
double lasso_lambda_max(const GroupedData& data);

/// `points` values log-spaced from lambda_max down to lambda_max * ratio.
std::vector<double> lasso_lambda_grid(double lambda_max, int points = 50, double ratio = 1e-3);

/// Lasso logistic path for the objective
///   -(1/n) loglik + lambda * sum_j |slope_j * scale_j|
/// i.e. an L1 penalty on standardized slopes. Lambdas must be strictly
/// decreasing and non-negative; solutions are warm-started along the grid.
/// Coefficients are reported on the original 0/1 scale.
std::vector<FitResult> fit_lasso_path(const GroupedData& data, std::span<const double> lambdas,
                                      const LassoControl& control = {});
std::vector<FitResult> fit_lasso_path(const BinaryMatrix& x, std::span<const std::uint8_t> y,
                                      std::span<const double> lambdas,
                                      const LassoControl& control = {});

/// Standardized-scale gradient (1/n) xstd_j' (y - mu) of the log-likelihood
/// at `fit`, one entry per slope. Subgradient optimality means
/// |r_j - lambda sign(b_j)| ~ 0 for nonzero slopes and |r_j| <= lambda otherwise.
std::vector<double> lasso_stationarity(const GroupedData& data, const FitResult& fit);

}  // namespace contest
