#pragma once

#include <cstdint>
#include <string>

#include "voltrip/model.hpp"
#include "voltrip/report.hpp"
#include "voltrip/synth.hpp"
#include "voltrip/volatility.hpp"

namespace voltrip {

struct SynthConfig {
  int n_trips = 200;
  std::uint64_t seed = 42;
  std::string noise_kind = "gaussian"; // none | gaussian | heteroskedastic
  double noise_sd = 1.0;
  std::string noise_covariate = "distance_mi";
  std::vector<double> beta; // empty -> default_ground_truth()
};

/// Single source of truth for a run; flags override fields.
struct RunConfig {
  std::string cycles_path;
  std::string trips_path;
  std::string vehicles_path;
  std::string persons_path;
  std::string output_dir = "out";

  SchemaMap cycles_schema = default_cycles_schema();
  SchemaMap trips_schema = default_trips_schema();
  SchemaMap vehicles_schema = default_vehicles_schema();
  SchemaMap persons_schema = default_persons_schema();

  ZeroSpeedPolicy zero_speed;
  int min_returns = kDefaultMinReturns;

  ModelSpec model = default_model_spec();
  int bootstrap_b = 200;
  std::uint64_t seed = 1;
  std::string format = "csv"; // text | csv | json
  int threads = 0;            // 0 = library default

  SynthConfig synth;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::string& path);

  ReportFormat report_format() const;
};

/// Ground-truth coefficients used by the default synthetic fixture.
Eigen::VectorXd default_ground_truth();

/// 64-bit FNV-1a of the canonical config JSON, hex-encoded.
std::string config_hash(const RunConfig& config);

/// Write-to-temp, atomic rename. A "# voltrip ..." metadata line is
/// prepended to CSV/text payloads (never to JSON).
void write_output(const std::string& path, const std::string& content,
                  const std::string& metadata_line = "");

// Stage entry points; each writes its output files under config.output_dir.
void run_synth(const RunConfig& config);
VolatilityBatch run_volatility(const RunConfig& config);
std::vector<AnalysisRow> load_analysis_rows(const RunConfig& config,
                                            const VolatilityBatch& batch);
void run_describe(const RunConfig& config);
void run_fit(const RunConfig& config);
void run_profile(const RunConfig& config);
void run_pipeline(const RunConfig& config);

} // namespace voltrip
