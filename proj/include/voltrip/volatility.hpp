#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "voltrip/ingest.hpp"

namespace voltrip {

enum class ZeroSpeedMode { DropPair, FloorEpsilon, Error };

/// What to do with speed pairs containing a zero (the log ratio is
/// undefined there). DropPair skips the pair and counts it.
struct ZeroSpeedPolicy {
  ZeroSpeedMode mode = ZeroSpeedMode::DropPair;
  double epsilon_mph = 0.1; // used by FloorEpsilon
};

struct LogReturnSeries {
  std::string trip_id;
  std::vector<double> returns; // percent log returns
  std::size_t n_dropped_zero = 0;
};

/// Percent log returns ln(x_i / x_{i-1}) * 100 over consecutive pairs.
LogReturnSeries log_returns(std::span<const double> speeds,
                            const ZeroSpeedPolicy& policy = {},
                            const std::string& trip_id = "");

inline constexpr int kDefaultMinReturns = 10;

/// Sample standard deviation (n-1 divisor) of the return series, in
/// percent. Throws TripExcludedError below min_returns.
double volatility(const LogReturnSeries& returns, int min_returns = kDefaultMinReturns);

struct TripVolatility {
  std::string trip_id;
  double volatility_pct = 0;
  std::size_t n_returns = 0;
  std::size_t n_dropped_zero = 0;
};

struct Exclusion {
  std::string trip_id;
  std::string reason; // "too-short" | "all-zero-dropped"
};

struct VolatilityBatch {
  std::vector<TripVolatility> results;   // sorted by trip_id
  std::vector<Exclusion> excluded;       // sorted by trip_id

  std::map<std::string, double> as_map() const;
  std::string to_csv() const;
  std::string exclusions_csv() const;
};

/// Per-trip volatility over a batch of cycles. OpenMP-parallel over
/// trips; output order is by trip_id regardless of schedule.
VolatilityBatch trip_volatilities(const std::vector<DrivingCycle>& cycles,
                                  const ZeroSpeedPolicy& policy = {},
                                  int min_returns = kDefaultMinReturns);

/// Serial reference implementation, kept for testing and benchmarks.
VolatilityBatch trip_volatilities_serial(const std::vector<DrivingCycle>& cycles,
                                         const ZeroSpeedPolicy& policy = {},
                                         int min_returns = kDefaultMinReturns);

} // namespace voltrip
