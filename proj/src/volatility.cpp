#include "voltrip/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "voltrip/error.hpp"

namespace voltrip {

LogReturnSeries log_returns(std::span<const double> speeds,
                            const ZeroSpeedPolicy& policy,
                            const std::string& trip_id) {
  if (speeds.size() < 2)
    throw DataError("log_returns needs at least 2 speed samples, got " +
                    std::to_string(speeds.size()));
  LogReturnSeries out;
  out.trip_id = trip_id;
  out.returns.reserve(speeds.size() - 1);
  for (std::size_t i = 1; i < speeds.size(); ++i) {
    double prev = speeds[i - 1], cur = speeds[i];
    switch (policy.mode) {
      case ZeroSpeedMode::DropPair:
        if (prev <= 0 || cur <= 0) {
          ++out.n_dropped_zero;
          continue;
        }
        break;
      case ZeroSpeedMode::FloorEpsilon:
        prev = std::max(prev, policy.epsilon_mph);
        cur = std::max(cur, policy.epsilon_mph);
        break;
      case ZeroSpeedMode::Error:
        if (prev <= 0 || cur <= 0)
          throw DataError("zero speed at sample index " +
                          std::to_string(prev <= 0 ? i - 1 : i) +
                          (trip_id.empty() ? "" : " of trip " + trip_id));
        break;
    }
    out.returns.push_back(std::log(cur / prev) * 100.0);
  }
  return out;
}

double volatility(const LogReturnSeries& returns, int min_returns) {
  const auto& r = returns.returns;
  if (static_cast<int>(r.size()) < min_returns)
    throw TripExcludedError("trip " + returns.trip_id + " has " +
                            std::to_string(r.size()) + " returns, needs " +
                            std::to_string(min_returns));
  // two-pass: trips are small, accuracy beats streaming
  double mean = 0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double ss = 0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(r.size() - 1));
}

namespace {

struct TripOutcome {
  bool included = false;
  TripVolatility result;
  Exclusion exclusion;
};

TripOutcome process_trip(const DrivingCycle& cycle, const ZeroSpeedPolicy& policy,
                         int min_returns) {
  TripOutcome out;
  std::vector<double> speeds;
  speeds.reserve(cycle.samples.size());
  for (const auto& s : cycle.samples) speeds.push_back(s.speed_mph);

  LogReturnSeries series;
  if (speeds.size() >= 2)
    series = log_returns(speeds, policy, cycle.trip_id);
  series.trip_id = cycle.trip_id;

  if (static_cast<int>(series.returns.size()) < min_returns) {
    bool zero_starved = series.returns.empty() && series.n_dropped_zero > 0;
    out.exclusion = {cycle.trip_id, zero_starved ? "all-zero-dropped" : "too-short"};
    return out;
  }
  out.included = true;
  out.result = {cycle.trip_id, volatility(series, min_returns),
                series.returns.size(), series.n_dropped_zero};
  return out;
}

VolatilityBatch collect(std::vector<TripOutcome>&& outcomes) {
  VolatilityBatch batch;
  for (auto& o : outcomes) {
    if (o.included) batch.results.push_back(std::move(o.result));
    else batch.excluded.push_back(std::move(o.exclusion));
  }
  auto by_id = [](const auto& a, const auto& b) { return a.trip_id < b.trip_id; };
  std::sort(batch.results.begin(), batch.results.end(), by_id);
  std::sort(batch.excluded.begin(), batch.excluded.end(), by_id);
  return batch;
}

} // namespace

VolatilityBatch trip_volatilities(const std::vector<DrivingCycle>& cycles,
                                  const ZeroSpeedPolicy& policy, int min_returns) {
  std::vector<TripOutcome> outcomes(cycles.size());
  const auto n = static_cast<std::ptrdiff_t>(cycles.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    outcomes[static_cast<std::size_t>(i)] =
        process_trip(cycles[static_cast<std::size_t>(i)], policy, min_returns);
  return collect(std::move(outcomes));
}

VolatilityBatch trip_volatilities_serial(const std::vector<DrivingCycle>& cycles,
                                         const ZeroSpeedPolicy& policy,
                                         int min_returns) {
  std::vector<TripOutcome> outcomes;
  outcomes.reserve(cycles.size());
  for (const auto& c : cycles) outcomes.push_back(process_trip(c, policy, min_returns));
  return collect(std::move(outcomes));
}

std::map<std::string, double> VolatilityBatch::as_map() const {
  std::map<std::string, double> m;
  for (const auto& r : results) m[r.trip_id] = r.volatility_pct;
  return m;
}

std::string VolatilityBatch::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "trip_id,volatility_pct,n_returns,n_dropped_zero\n";
  for (const auto& r : results)
    os << r.trip_id << ',' << r.volatility_pct << ',' << r.n_returns << ','
       << r.n_dropped_zero << '\n';
  return os.str();
}

std::string VolatilityBatch::exclusions_csv() const {
  std::ostringstream os;
  os << "trip_id,reason\n";
  for (const auto& e : excluded) os << e.trip_id << ',' << e.reason << '\n';
  return os.str();
}

} // namespace voltrip
