#pragma once

#include <string>
#include <vector>

#include "voltrip/model.hpp"
#include "voltrip/stats.hpp"

namespace voltrip {

enum class ReportFormat { Text, Csv, Json };

struct DescriptiveRow {
  std::string variable;
  SummaryStats stats;
};

/// Table layout: Variable, N, Mean, Std. Dev., Min, Max; 3-decimal
/// formatting by default.
std::string render_descriptive(const std::vector<DescriptiveRow>& rows,
                               ReportFormat format = ReportFormat::Text,
                               int decimals = 3);

/// One row per variable, grouped under base-category headers; cells are
/// "coef (t)"; footer carries R^2 / pseudo-R^2 and deviation sums.
std::string render_coefficients(const std::vector<FitResult>& fits,
                                const ModelSpec& spec,
                                ReportFormat format = ReportFormat::Text,
                                int decimals = 3);

/// Long-format rows: variable, q, coef, lo, hi, ols_ref; sorted by
/// (variable order, q).
std::string export_profile(const QuantileProfile& profile);

} // namespace voltrip
