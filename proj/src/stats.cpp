#include "voltrip/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "voltrip/error.hpp"

namespace voltrip {

SummaryStats describe(std::span<const double> values) {
  if (values.empty()) throw DataError("describe: empty input");
  SummaryStats s;
  s.n = values.size();
  s.min = s.max = values[0];
  double sum = 0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("describe: non-finite value");
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

namespace {

double interpolated_quantile(std::vector<double> sorted, double q) {
  // linear interpolation (type 7), used only for the FD bin-width rule
  double h = q * (static_cast<double>(sorted.size()) - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

Histogram histogram(std::span<const double> values, const Binning& binning) {
  if (values.empty()) throw DataError("histogram: empty input");
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());

  int k = 0;
  switch (binning.kind) {
    case Binning::Kind::FixedCount:
      if (binning.count < 1) throw DataError("histogram: bin count must be >= 1");
      k = binning.count;
      break;
    case Binning::Kind::FixedWidth: {
      if (binning.width <= 0) throw DataError("histogram: bin width must be > 0");
      if (hi == lo) k = 1;
      else k = static_cast<int>(std::ceil((hi - lo) / binning.width));
      break;
    }
    case Binning::Kind::FreedmanDiaconis: {
      std::vector<double> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      double iqr = interpolated_quantile(sorted, 0.75) - interpolated_quantile(sorted, 0.25);
      double h = 2.0 * iqr * std::pow(static_cast<double>(values.size()), -1.0 / 3.0);
      if (h <= 0 || hi == lo) {
        // degenerate data: one unit-width bin centered on the value
        Histogram hst;
        hst.bin_edges = {lo - 0.5, lo + 0.5};
        hst.counts = {values.size()};
        return hst;
      }
      k = static_cast<int>(std::ceil((hi - lo) / h));
      break;
    }
  }

  Histogram hst;
  if (hi == lo) {
    // all identical with an explicit binning: single degenerate-range bin
    hst.bin_edges = {lo - 0.5, lo + 0.5};
    if (k > 1) {
      hst.bin_edges.clear();
      for (int i = 0; i <= k; ++i)
        hst.bin_edges.push_back(lo - 0.5 + static_cast<double>(i) / k);
    }
    hst.counts.assign(hst.bin_edges.size() - 1, 0);
    for (std::size_t i = 0; i < hst.counts.size(); ++i) {
      if (lo >= hst.bin_edges[i] && (lo < hst.bin_edges[i + 1] || i + 1 == hst.counts.size()))
        hst.counts[i] = values.size();
    }
    return hst;
  }

  hst.bin_edges.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i)
    hst.bin_edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / k;
  hst.bin_edges.front() = lo;
  hst.bin_edges.back() = hi;
  hst.counts.assign(static_cast<std::size_t>(k), 0);
  double width = (hi - lo) / k;
  for (double v : values) {
    auto bin = static_cast<long long>((v - lo) / width);
    if (bin < 0) bin = 0;
    if (bin >= k) bin = k - 1; // right edge inclusive on the last bin
    ++hst.counts[static_cast<std::size_t>(bin)];
  }
  return hst;
}

std::string Histogram::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i)
    os << bin_edges[i] << ',' << bin_edges[i + 1] << ',' << counts[i] << '\n';
  return os.str();
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DataError("pearson: length mismatch");
  if (x.size() < 2) throw DataError("pearson: need at least 2 points");
  auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0)
    throw DataError("pearson: zero variance input, correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

double vif(const DesignMatrix& design, Eigen::Index column_index) {
  if (column_index <= 0 || column_index >= design.p())
    throw DataError("vif: column index out of range (non-intercept columns only)");
  if (design.p() < 3)
    throw DataError("vif: need at least 2 predictor columns plus intercept");

  DesignMatrix sub;
  sub.X.resize(design.n(), design.p() - 1);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < design.p(); ++j) {
    if (j == column_index) continue;
    sub.X.col(out) = design.X.col(j);
    sub.column_names.push_back(design.column_names.empty()
                                   ? "c" + std::to_string(j)
                                   : design.column_names[static_cast<std::size_t>(j)]);
    ++out;
  }
  sub.y = design.X.col(column_index);
  double var = (sub.y.array() - sub.y.mean()).square().sum();
  if (var == 0)
    throw DataError("vif: target column has zero variance");

  FitResult fit = fit_ols(sub);
  double r2 = fit.fit_measure;
  if (r2 > 1.0 - 1e-10) {
    std::string name = design.column_names.empty()
                           ? std::to_string(column_index)
                           : design.column_names[static_cast<std::size_t>(column_index)];
    throw DataError("vif: perfect collinearity, infinite VIF for column " + name);
  }
  return 1.0 / (1.0 - r2);
}

} // namespace voltrip
