#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voltrip/model.hpp"

namespace voltrip {

struct CycleParams {
  int n_seconds = 2;
  double base_speed_mph = 30.0;
  double target_volatility_pct = 13.0;
  int n_stops = 0;
  std::uint64_t seed = 0;
};

/// Geometric random walk x_t = x_{t-1} * exp(sigma * z_t) with
/// sigma = target/100, plus n_stops zero-speed dwells at seeded
/// positions. Deterministic per seed.
DrivingCycle gen_cycle(const CycleParams& params, const std::string& trip_id);

enum class NoiseKind { None, Gaussian, Heteroskedastic };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double sd = 0;                // Gaussian
  std::string covariate;        // Heteroskedastic: (1 + x) * e on this column
};

/// Synthetic dataset in the ingest module's CSV schemas, plus a manifest
/// with the ground-truth coefficients.
struct SynthDataset {
  std::vector<DrivingCycle> cycles;
  std::string cycles_csv;
  std::string trips_csv;
  std::string vehicles_csv;
  std::string persons_csv;
  std::string manifest_json;
};

/// beta is over the default_model_spec() design layout
/// (intercept + continuous + dummies, in declared order).
SynthDataset gen_dataset(int n_trips, const Eigen::VectorXd& beta,
                         const NoiseModel& noise, std::uint64_t seed);

/// The heteroskedastic benchmark design: x ~ U(0,2),
/// y = 2 + 3x + (1+x)*e with e standard normal. True q-slope is 3 + z_q.
DesignMatrix hetero_design(int n, std::uint64_t seed);

} // namespace voltrip
