#include "voltrip/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "voltrip/error.hpp"

namespace voltrip {

namespace {

std::string num(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

std::string fit_label(const FitResult& f) {
  if (f.kind == FitKind::OLS) return "OLS";
  std::ostringstream os;
  os << "q=" << std::fixed << std::setprecision(2) << f.q;
  return os.str();
}

std::string cell(const FitResult& f, Eigen::Index j, int decimals) {
  double coef = f.coefficients(j);
  if (!std::isfinite(coef)) return "aliased";
  double t = f.t_values(j);
  std::string tv = std::isfinite(t) ? num(t, decimals) : "NA";
  return num(coef, decimals) + " (" + tv + ")";
}

} // namespace

std::string render_descriptive(const std::vector<DescriptiveRow>& rows,
                               ReportFormat format, int decimals) {
  if (rows.empty()) throw DataError("render_descriptive: no variables");

  if (format == ReportFormat::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o;
      o["variable"] = r.variable;
      o["n"] = r.stats.n;
      o["mean"] = r.stats.mean;
      o["std"] = r.stats.std;
      o["min"] = r.stats.min;
      o["max"] = r.stats.max;
      j.push_back(o);
    }
    return j.dump(2);
  }

  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "variable,n,mean,std,min,max\n";
    for (const auto& r : rows)
      os << r.variable << ',' << r.stats.n << ',' << num(r.stats.mean, decimals)
         << ',' << num(r.stats.std, decimals) << ',' << num(r.stats.min, decimals)
         << ',' << num(r.stats.max, decimals) << '\n';
    return os.str();
  }

  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.variable.size());
  os << std::left << std::setw(static_cast<int>(width + 2)) << "Variable"
     << std::right << std::setw(8) << "N" << std::setw(12) << "Mean"
     << std::setw(12) << "Std. Dev." << std::setw(12) << "Min"
     << std::setw(12) << "Max" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(width + 2)) << r.variable
       << std::right << std::setw(8) << r.stats.n << std::setw(12)
       << num(r.stats.mean, decimals) << std::setw(12) << num(r.stats.std, decimals)
       << std::setw(12) << num(r.stats.min, decimals) << std::setw(12)
       << num(r.stats.max, decimals) << '\n';
  }
  return os.str();
}

std::string render_coefficients(const std::vector<FitResult>& fits,
                                const ModelSpec& spec, ReportFormat format,
                                int decimals) {
  if (fits.empty()) throw DataError("render_coefficients: no fits");
  for (const auto& f : fits)
    if (f.column_names != fits.front().column_names)
      throw DataError("render_coefficients: fits come from different designs");

  const auto& names = fits.front().column_names;
  auto column_index = [&](const std::string& name) -> Eigen::Index {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw DataError("render_coefficients: design lacks column " + name);
  };

  // render order: continuous variables, then each categorical group
  struct Line {
    std::string label;
    bool header = false;       // group header row, no cells
    Eigen::Index column = -1;
  };
  std::vector<Line> lines;
  for (const auto& c : spec.continuous) lines.push_back({c, false, column_index(c)});
  for (const auto& cat : spec.categorical) {
    lines.push_back({cat.column + " (base: " + cat.base + ")", true, -1});
    for (const auto& level : cat.categories)
      if (level != cat.base)
        lines.push_back({"  " + level, false, column_index(cat.column + "=" + level)});
  }
  lines.push_back({"intercept", false, column_index("intercept")});

  if (format == ReportFormat::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : fits) j.push_back(nlohmann::json::parse(f.to_json()));
    return j.dump(2);
  }

  const char sep = format == ReportFormat::Csv ? ',' : '\t';
  std::ostringstream os;
  os << "Variable";
  for (const auto& f : fits) os << sep << fit_label(f);
  os << '\n';
  for (const auto& line : lines) {
    os << line.label;
    if (!line.header)
      for (const auto& f : fits) os << sep << cell(f, line.column, decimals);
    else
      for (std::size_t i = 0; i < fits.size(); ++i) os << sep;
    os << '\n';
  }
  os << "R2";
  for (const auto& f : fits) os << sep << num(f.fit_measure, decimals);
  os << '\n';
  os << "Raw sum of deviations";
  for (const auto& f : fits)
    os << sep << (f.kind == FitKind::Quantile ? num(f.raw_deviation, decimals) : "NA");
  os << '\n';
  os << "Min. sum of deviations";
  for (const auto& f : fits)
    os << sep << (f.kind == FitKind::Quantile ? num(f.objective, decimals) : "NA");
  os << '\n';
  return os.str();
}

std::string export_profile(const QuantileProfile& profile) {
  if (profile.entries.empty()) throw DataError("export_profile: empty profile");
  std::ostringstream os;
  os.precision(17);
  os << "variable,q,coef,lo,hi,ols_ref\n";
  for (const auto& e : profile.entries)
    os << e.column << ',' << e.q << ',' << e.coefficient << ',' << e.lower << ','
       << e.upper << ',' << e.ols_reference << '\n';
  return os.str();
}

} // namespace voltrip
