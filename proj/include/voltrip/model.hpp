#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "voltrip/ingest.hpp"

namespace voltrip {

struct CategoricalSpec {
  std::string column;
  std::vector<std::string> categories; // declared order
  std::string base;                    // member of categories
};

struct ModelSpec {
  std::string dependent;
  std::vector<std::string> continuous;
  std::vector<CategoricalSpec> categorical;
  std::vector<double> quantiles; // strictly increasing, inside (0,1)

  void validate() const;
};

/// The standard layout over the full AnalysisRow covariate set.
ModelSpec default_model_spec();

struct DesignMatrix {
  std::vector<std::string> column_names; // first is "intercept"
  Eigen::MatrixXd X;                     // n x p, first column all ones
  Eigen::VectorXd y;
  std::vector<std::string> row_keys;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

DesignMatrix build_design(const std::vector<AnalysisRow>& rows, const ModelSpec& spec);

enum class FitKind { OLS, Quantile };

struct FitResult {
  FitKind kind = FitKind::OLS;
  double q = 0;                          // quantile fits only
  std::vector<std::string> column_names;
  Eigen::VectorXd coefficients;          // NaN for aliased columns
  Eigen::VectorXd std_errors;            // NaN where unavailable
  Eigen::VectorXd t_values;
  double objective = 0;                  // SSE (OLS) or check loss (quantile)
  double fit_measure = 0;                // R^2 or pseudo-R^2
  double raw_deviation = 0;              // quantile only
  std::vector<std::string> aliased;
  int iterations = 0;

  std::string to_json() const;
};

/// OLS via rank-revealing QR; collinear columns are aliased and reported.
FitResult fit_ols(const DesignMatrix& design);

double check_loss(double q, std::span<const double> residuals);
double check_loss(double q, const Eigen::VectorXd& residuals);

/// Empirical q-quantile, lower vertex of the minimizing interval (type 1).
double empirical_quantile(std::span<const double> values, double q);

struct QuantileSolverOptions {
  double gap_tolerance = 1e-8; // relative duality gap
  int max_iterations = 200;
};

/// Quantile regression by a primal-dual interior-point method on the LP
/// formulation. Standard errors are left NaN; use bootstrap_se.
FitResult fit_quantile(const DesignMatrix& design, double q,
                       const QuantileSolverOptions& opts = {});

double pseudo_r2(double min_deviation, double raw_deviation);

/// Pairs bootstrap standard errors for a quantile fit. Deterministic in
/// seed regardless of thread count (per-resample RNG streams).
Eigen::VectorXd bootstrap_se(const DesignMatrix& design, double q, int B,
                             std::uint64_t seed,
                             const QuantileSolverOptions& opts = {});

struct ProfileEntry {
  std::string column;
  double q = 0;
  double coefficient = 0;
  double lower = 0;
  double upper = 0;
  double ols_reference = 0;
};

struct QuantileProfile {
  std::vector<double> quantiles;
  std::vector<std::string> column_names;
  std::vector<ProfileEntry> entries; // sorted by (column order, q)
  std::vector<FitResult> fits;       // one per quantile
  FitResult ols_fit;
};

QuantileProfile quantile_profile(const DesignMatrix& design,
                                 const std::vector<double>& quantiles, int B,
                                 std::uint64_t seed,
                                 const QuantileSolverOptions& opts = {});

/// Attaches bootstrap standard errors / t-values to a quantile fit.
void attach_bootstrap(FitResult& fit, const Eigen::VectorXd& se);

} // namespace voltrip
