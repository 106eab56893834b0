#pragma once

#include <span>
#include <vector>

#include "voltrip/model.hpp"

namespace voltrip {

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0;
  double std = 0; // sample, n-1 divisor; 0 for n = 1
  double min = 0;
  double max = 0;
};

SummaryStats describe(std::span<const double> values);

struct Histogram {
  std::vector<double> bin_edges; // k+1, strictly increasing
  std::vector<std::size_t> counts;

  std::string to_csv() const; // bin_left, bin_right, count
};

struct Binning {
  enum class Kind { FreedmanDiaconis, FixedCount, FixedWidth };
  Kind kind = Kind::FreedmanDiaconis;
  int count = 0;
  double width = 0;

  static Binning freedman_diaconis() { return {}; }
  static Binning fixed_count(int k) { return {Kind::FixedCount, k, 0}; }
  static Binning fixed_width(double w) { return {Kind::FixedWidth, 0, w}; }
};

/// Bins cover [min, max]; the right edge is inclusive on the last bin only.
Histogram histogram(std::span<const double> values, const Binning& binning = {});

double pearson(std::span<const double> x, std::span<const double> y);

/// Variance inflation factor 1 / (1 - R^2_j), where R^2_j comes from
/// regressing design column j on all other predictors via fit_ols.
/// column_index refers to a non-intercept column.
double vif(const DesignMatrix& design, Eigen::Index column_index);

} // namespace voltrip
