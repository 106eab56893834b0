#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "voltrip/error.hpp"
#include "voltrip/rng.hpp"
#include "voltrip/volatility.hpp"

using namespace voltrip;

TEST_CASE("log_returns equal speeds give zero") {
  std::vector<double> s = {10, 10};
  auto r = log_returns(s);
  REQUIRE(r.returns.size() == 1);
  CHECK(r.returns[0] == 0.0);
}

TEST_CASE("log_returns doubling gives 100 ln 2") {
  std::vector<double> s = {10, 20};
  auto r = log_returns(s);
  REQUIRE(r.returns.size() == 1);
  CHECK(r.returns[0] == doctest::Approx(69.31471805599453).epsilon(1e-12));
}

TEST_CASE("log_returns drop-pair policy skips zero speeds") {
  std::vector<double> s = {10, 0, 10};
  auto r = log_returns(s);
  CHECK(r.returns.empty());
  CHECK(r.n_dropped_zero == 2);
}

TEST_CASE("log_returns floor policy clamps instead of dropping") {
  std::vector<double> s = {10, 0, 10};
  ZeroSpeedPolicy policy{ZeroSpeedMode::FloorEpsilon, 0.1};
  auto r = log_returns(s, policy);
  REQUIRE(r.returns.size() == 2);
  CHECK(r.returns[0] == doctest::Approx(std::log(0.1 / 10.0) * 100));
  CHECK(r.returns[1] == doctest::Approx(std::log(10.0 / 0.1) * 100));
  CHECK(r.n_dropped_zero == 0);
}

TEST_CASE("log_returns error policy names the index") {
  std::vector<double> s = {10, 0, 10};
  ZeroSpeedPolicy policy{ZeroSpeedMode::Error, 0.1};
  CHECK_THROWS_AS(log_returns(s, policy), DataError);
}

TEST_CASE("log_returns needs two samples") {
  std::vector<double> s = {10};
  CHECK_THROWS_AS(log_returns(s), DataError);
}

TEST_CASE("volatility of constant speeds is zero") {
  std::vector<double> s = {15, 15, 15, 15};
  CHECK(volatility(log_returns(s), 2) == 0.0);
}

TEST_CASE("volatility of alternating speeds") {
  // returns [+r, -r, +r], r = 100 ln 2; sd = 2r/sqrt(3)
  std::vector<double> s = {10, 20, 10, 20};
  double expected = 2.0 * 69.31471805599453 / std::sqrt(3.0);
  CHECK(volatility(log_returns(s), 2) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(80.0377).epsilon(1e-5));
}

TEST_CASE("geometric speeds have identical returns, zero volatility") {
  std::vector<double> s = {10, 20, 40, 80};
  CHECK(volatility(log_returns(s), 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("volatility below min_returns is a trip exclusion") {
  std::vector<double> s = {10, 12, 11};
  CHECK_THROWS_AS(volatility(log_returns(s), 10), TripExcludedError);
}

TEST_CASE("scale invariance of volatility") {
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s;
    int n = 20 + static_cast<int>(rng.next_below(200));
    for (int i = 0; i < n; ++i) s.push_back(rng.next_uniform(0.1, 100));
    double c = rng.next_uniform(0.01, 100);
    std::vector<double> scaled = s;
    for (double& v : scaled) v *= c;
    double a = volatility(log_returns(s), 2);
    double b = volatility(log_returns(scaled), 2);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("volatility matches the naive oracle on random traces") {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> s;
    int n = 3 + static_cast<int>(rng.next_below(500));
    for (int i = 0; i < n; ++i) s.push_back(rng.next_uniform(0.1, 100));
    double mine = volatility(log_returns(s), 2);
    double oracle = oracles::naive_volatility(s);
    CHECK(mine == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("trip_volatilities batch semantics") {
  std::vector<DrivingCycle> cycles;
  DrivingCycle good{"good", {}};
  for (int i = 0; i < 30; ++i)
    good.samples.push_back({i, 20.0 + (i % 3)});
  DrivingCycle tiny{"tiny", {{0, 10}, {1, 12}}};
  DrivingCycle stopped{"stopped", {{0, 10}, {1, 0}, {2, 10}}};
  cycles = {good, tiny, stopped};

  VolatilityBatch batch = trip_volatilities(cycles, {}, 10);
  REQUIRE(batch.results.size() == 1);
  CHECK(batch.results[0].trip_id == "good");
  REQUIRE(batch.excluded.size() == 2);
  CHECK(batch.excluded[0].trip_id == "stopped");
  CHECK(batch.excluded[0].reason == "all-zero-dropped");
  CHECK(batch.excluded[1].trip_id == "tiny");
  CHECK(batch.excluded[1].reason == "too-short");
}

TEST_CASE("parallel and serial batch implementations agree") {
  Rng rng(3);
  std::vector<DrivingCycle> cycles;
  for (int t = 0; t < 300; ++t) {
    DrivingCycle c;
    c.trip_id = "T" + std::to_string(t);
    int n = 2 + static_cast<int>(rng.next_below(100));
    for (int i = 0; i < n; ++i) {
      double speed = rng.next_below(20) == 0 ? 0.0 : rng.next_uniform(0.1, 90);
      c.samples.push_back({i, speed});
    }
    cycles.push_back(c);
  }
  VolatilityBatch par = trip_volatilities(cycles, {}, 5);
  VolatilityBatch ser = trip_volatilities_serial(cycles, {}, 5);
  REQUIRE(par.results.size() == ser.results.size());
  REQUIRE(par.excluded.size() == ser.excluded.size());
  for (std::size_t i = 0; i < par.results.size(); ++i) {
    CHECK(par.results[i].trip_id == ser.results[i].trip_id);
    CHECK(par.results[i].volatility_pct == ser.results[i].volatility_pct);
    CHECK(par.results[i].n_returns == ser.results[i].n_returns);
  }
}

TEST_CASE("volatility csv export shape") {
  std::vector<DrivingCycle> cycles{{"a", {{0, 10}, {1, 11}, {2, 12}}}};
  VolatilityBatch batch = trip_volatilities(cycles, {}, 2);
  std::string csv = batch.to_csv();
  CHECK(csv.rfind("trip_id,volatility_pct,n_returns,n_dropped_zero\n", 0) == 0);
  CHECK(csv.find("a,") != std::string::npos);
}
