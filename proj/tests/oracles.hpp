// Independent reference implementations used only by the test suites.
// Each one is a direct transcription of the defining formula, kept free
// of the library's implementation paths.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace oracles {

/// Naive volatility: percent log returns over consecutive positive
/// pairs, then the (n-1)-divisor sample standard deviation.
inline double naive_volatility(std::span<const double> speeds) {
  std::vector<double> r;
  for (std::size_t i = 1; i < speeds.size(); ++i)
    if (speeds[i - 1] > 0 && speeds[i] > 0)
      r.push_back(std::log(speeds[i] / speeds[i - 1]) * 100.0);
  double mean = 0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double ss = 0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(r.size() - 1));
}

/// Normal-equations OLS: (X'X)^{-1} X'y, no factorization tricks.
inline Eigen::VectorXd normal_equations_ols(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y) {
  Eigen::MatrixXd xtx = X.transpose() * X;
  return xtx.inverse() * (X.transpose() * y);
}

inline double check_loss_direct(double q, const Eigen::VectorXd& resid) {
  double total = 0;
  for (Eigen::Index i = 0; i < resid.size(); ++i) {
    double e = resid(i);
    total += e >= 0 ? q * e : (1 - q) * (-e);
  }
  return total;
}

/// Fine-lattice grid search for a two-parameter quantile fit: coarse
/// lattice over the given ranges, then two refinement passes around the
/// incumbent.
inline double grid_search_quantile(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y, double q,
                                   double b0_lo, double b0_hi, double b1_lo,
                                   double b1_hi) {
  const int steps = 160;
  double best = std::numeric_limits<double>::infinity();
  double c0 = 0, c1 = 0;
  for (int pass = 0; pass < 3; ++pass) {
    double best0 = c0, best1 = c1;
    for (int i = 0; i <= steps; ++i) {
      double b0 = b0_lo + (b0_hi - b0_lo) * i / steps;
      for (int j = 0; j <= steps; ++j) {
        double b1 = b1_lo + (b1_hi - b1_lo) * j / steps;
        Eigen::VectorXd resid = y - X.col(0) * b0 - X.col(1) * b1;
        double loss = check_loss_direct(q, resid);
        if (loss < best) {
          best = loss;
          best0 = b0;
          best1 = b1;
        }
      }
    }
    double span0 = (b0_hi - b0_lo) / steps * 4;
    double span1 = (b1_hi - b1_lo) / steps * 4;
    b0_lo = best0 - span0;
    b0_hi = best0 + span0;
    b1_lo = best1 - span1;
    b1_hi = best1 + span1;
    c0 = best0;
    c1 = best1;
  }
  return best;
}

/// Exact LAD minimum for p = 2 by vertex enumeration: the optimum
/// interpolates two data points (or is degenerate, covered by pairs).
inline double exact_lad_minimum(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::Index n = X.rows();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double det = X(i, 0) * X(j, 1) - X(j, 0) * X(i, 1);
      if (std::abs(det) < 1e-12) continue;
      double b0 = (y(i) * X(j, 1) - y(j) * X(i, 1)) / det;
      double b1 = (X(i, 0) * y(j) - X(j, 0) * y(i)) / det;
      double total = 0;
      for (Eigen::Index k = 0; k < n; ++k)
        total += std::abs(y(k) - X(k, 0) * b0 - X(k, 1) * b1);
      best = std::min(best, total);
    }
  }
  return best;
}

/// Freedman-Diaconis bin count: ceil(range / (2 IQR n^{-1/3})), IQR by
/// linear interpolation on the sorted sample.
inline int fd_bin_count(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  auto quant = [&](double q) {
    double h = q * (static_cast<double>(values.size()) - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - lo) * (values[hi] - values[lo]);
  };
  double iqr = quant(0.75) - quant(0.25);
  double h = 2.0 * iqr * std::pow(static_cast<double>(values.size()), -1.0 / 3.0);
  double range = values.back() - values.front();
  return static_cast<int>(std::ceil(range / h));
}

/// Asymptotic slope variance for median regression with N(0,1) errors:
/// q(1-q) / f(0)^2 * [(X'X)^{-1}]_{11}.
inline double asymptotic_median_slope_se(const Eigen::MatrixXd& X) {
  double f0 = 1.0 / std::sqrt(2.0 * M_PI);
  Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  return std::sqrt(0.25 / (f0 * f0) * xtx_inv(1, 1));
}

} // namespace oracles
