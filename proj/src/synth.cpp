#include "voltrip/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "voltrip/error.hpp"
#include "voltrip/rng.hpp"

namespace voltrip {

DrivingCycle gen_cycle(const CycleParams& params, const std::string& trip_id) {
  if (params.n_seconds < 2) throw DataError("gen_cycle: n_seconds must be >= 2");
  if (params.base_speed_mph <= 0) throw DataError("gen_cycle: base speed must be > 0");
  if (params.target_volatility_pct < 0) throw DataError("gen_cycle: negative target volatility");

  Rng rng(params.seed);
  double sigma = params.target_volatility_pct / 100.0;

  DrivingCycle cycle;
  cycle.trip_id = trip_id;
  cycle.samples.reserve(static_cast<std::size_t>(params.n_seconds));
  double x = params.base_speed_mph;
  cycle.samples.push_back({0, x});
  for (int t = 1; t < params.n_seconds; ++t) {
    if (sigma > 0) x *= std::exp(sigma * rng.next_normal());
    cycle.samples.push_back({t, x});
  }

  // zero-speed dwells at seeded interior positions
  if (params.n_stops > 0 && params.n_seconds > 2) {
    std::set<int> positions;
    int interior = params.n_seconds - 2;
    int stops = std::min(params.n_stops, interior);
    while (static_cast<int>(positions.size()) < stops)
      positions.insert(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(interior))));
    for (int pos : positions) cycle.samples[static_cast<std::size_t>(pos)].speed_mph = 0;
  }
  return cycle;
}

namespace {

BodyType draw_body(Rng& rng) {
  // roughly survey-like mix, sedan-heavy
  static const double w[] = {0.40, 0.20, 0.12, 0.06, 0.02, 0.07, 0.04, 0.05, 0.02, 0.02};
  double u = rng.next_double(), acc = 0;
  for (int i = 0; i < 10; ++i) {
    acc += w[i];
    if (u < acc) return static_cast<BodyType>(i);
  }
  return BodyType::Other;
}

Transmission draw_transmission(Rng& rng) {
  double u = rng.next_double();
  if (u < 0.866) return Transmission::Automatic;
  if (u < 0.98) return Transmission::Manual;
  return Transmission::Both;
}

Powertrain draw_powertrain(Rng& rng) {
  double u = rng.next_double();
  if (u < 0.6) return Powertrain::FrontWheel;
  if (u < 0.8) return Powertrain::RearWheel;
  return Powertrain::FourWheel;
}

} // namespace

SynthDataset gen_dataset(int n_trips, const Eigen::VectorXd& beta,
                         const NoiseModel& noise, std::uint64_t seed) {
  if (n_trips < 0) throw DataError("gen_dataset: negative trip count");

  ModelSpec spec = default_model_spec();
  SynthDataset out;

  int n_households = std::max(1, n_trips / 3);
  std::vector<VehicleRecord> vehicles;
  std::vector<PersonRecord> persons;
  for (int h = 0; h < n_households && n_trips > 0; ++h) {
    Rng rng = Rng::stream(seed ^ 0xA5A5A5A5A5A5A5A5ULL, static_cast<std::uint64_t>(h));
    std::string hid = "H" + std::to_string(h);
    VehicleRecord v;
    v.vehicle_id = "V" + std::to_string(h);
    v.household_id = hid;
    v.driver_person_id = "P" + std::to_string(h);
    v.is_afv = rng.next_bernoulli(0.22) ? 1.0 : 0.0;
    v.body_type = draw_body(rng);
    v.transmission = draw_transmission(rng);
    v.vehicle_age_years = std::floor(rng.next_uniform(0, 16));
    v.n_cylinders = 4.0 + 2.0 * std::floor(rng.next_uniform(0, 3));
    v.powertrain = draw_powertrain(rng);
    v.ownership_nonowned = rng.next_bernoulli(0.05) ? 1.0 : 0.0;
    vehicles.push_back(v);

    PersonRecord p;
    p.person_id = "P" + std::to_string(h);
    p.household_id = hid;
    p.is_female = rng.next_bernoulli(0.55) ? 1.0 : 0.0;
    p.age_band = static_cast<AgeBand>(rng.next_below(8));
    p.not_employed = rng.next_bernoulli(0.27) ? 1.0 : 0.0;
    persons.push_back(p);
  }

  std::vector<TripSummary> trips;
  std::vector<AnalysisRow> rows;
  std::vector<int> cycle_lengths;
  std::vector<double> base_speeds;
  for (int t = 0; t < n_trips; ++t) {
    Rng rng = Rng::stream(seed ^ 0x5A5A5A5A5A5A5A5AULL, static_cast<std::uint64_t>(t));
    int h = t % n_households;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "T%06d", t);

    TripSummary trip;
    trip.trip_id = idbuf;
    trip.household_id = "H" + std::to_string(h);
    trip.vehicle_id = "V" + std::to_string(h);
    double speed = rng.next_uniform(10, 60);
    double minutes = rng.next_uniform(4, 40);
    trip.avg_speed_mph = speed;
    trip.travel_time_min = minutes;
    trip.distance_mi = speed * minutes / 60.0;
    trip.n_stops = 1.0 + std::floor(rng.next_uniform(0, 8));
    trip.grade_sd = std::abs(1.5 * rng.next_normal());
    trips.push_back(trip);

    cycle_lengths.push_back(120 + static_cast<int>(rng.next_below(480)));
    base_speeds.push_back(speed);

    AnalysisRow row;
    row.trip_id = trip.trip_id;
    row.volatility_pct = 0; // placeholder until targets are computed
    row.distance_mi = trip.distance_mi;
    row.travel_time_min = trip.travel_time_min;
    row.avg_speed_mph = trip.avg_speed_mph;
    row.n_stops = trip.n_stops;
    row.grade_sd = trip.grade_sd;
    const VehicleRecord& v = vehicles[static_cast<std::size_t>(h)];
    row.is_afv = v.is_afv;
    row.body_type = v.body_type;
    row.transmission = v.transmission;
    row.vehicle_age_years = v.vehicle_age_years;
    row.n_cylinders = v.n_cylinders;
    row.powertrain = v.powertrain;
    row.ownership_nonowned = v.ownership_nonowned;
    const PersonRecord& p = persons[static_cast<std::size_t>(h)];
    row.is_female = p.is_female;
    row.age_band = p.age_band;
    row.not_employed = p.not_employed;
    rows.push_back(row);
  }

  std::vector<double> targets;
  if (n_trips > 0) {
    DesignMatrix design = build_design(rows, spec);
    if (beta.size() != design.p())
      throw DataError("gen_dataset: coefficient vector has " +
                      std::to_string(beta.size()) + " entries, design has " +
                      std::to_string(design.p()) + " columns");
    Eigen::VectorXd mean = design.X * beta;
    for (int t = 0; t < n_trips; ++t) {
      Rng rng = Rng::stream(seed ^ 0x3C3C3C3C3C3C3C3CULL, static_cast<std::uint64_t>(t));
      double e = 0;
      switch (noise.kind) {
        case NoiseKind::None:
          break;
        case NoiseKind::Gaussian:
          e = noise.sd * rng.next_normal();
          break;
        case NoiseKind::Heteroskedastic: {
          double x = continuous_field(rows[static_cast<std::size_t>(t)], noise.covariate);
          e = (1.0 + x) * rng.next_normal();
          break;
        }
      }
      targets.push_back(std::max(0.0, mean(t) + e));
    }
  }

  for (int t = 0; t < n_trips; ++t) {
    CycleParams params;
    params.n_seconds = cycle_lengths[static_cast<std::size_t>(t)];
    params.base_speed_mph = base_speeds[static_cast<std::size_t>(t)];
    params.target_volatility_pct = targets[static_cast<std::size_t>(t)];
    params.n_stops = static_cast<int>(*trips[static_cast<std::size_t>(t)].n_stops) - 1;
    params.seed = Rng::stream(seed, static_cast<std::uint64_t>(t)).next_u64();
    out.cycles.push_back(gen_cycle(params, trips[static_cast<std::size_t>(t)].trip_id));
  }

  out.cycles_csv = serialize_cycles(out.cycles);
  out.trips_csv = serialize_trips(trips);
  out.vehicles_csv = serialize_vehicles(vehicles);
  out.persons_csv = serialize_persons(persons);

  nlohmann::json manifest;
  manifest["seed"] = seed;
  manifest["n_trips"] = n_trips;
  manifest["noise"]["kind"] = noise.kind == NoiseKind::None        ? "none"
                              : noise.kind == NoiseKind::Gaussian  ? "gaussian"
                                                                   : "heteroskedastic";
  if (noise.kind == NoiseKind::Gaussian) manifest["noise"]["sd"] = noise.sd;
  if (noise.kind == NoiseKind::Heteroskedastic) manifest["noise"]["covariate"] = noise.covariate;
  {
    // ground truth, keyed by design column name
    ModelSpec s = default_model_spec();
    std::vector<std::string> names;
    names.push_back("intercept");
    for (const auto& c : s.continuous) names.push_back(c);
    for (const auto& cat : s.categorical)
      for (const auto& level : cat.categories)
        if (level != cat.base) names.push_back(cat.column + "=" + level);
    nlohmann::json b = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size() && i < static_cast<std::size_t>(beta.size()); ++i)
      b[names[i]] = beta(static_cast<Eigen::Index>(i));
    manifest["beta"] = b;
  }
  out.manifest_json = manifest.dump(2);
  return out;
}

DesignMatrix hetero_design(int n, std::uint64_t seed) {
  if (n < 3) throw DataError("hetero_design: n too small");
  DesignMatrix d;
  d.column_names = {"intercept", "x"};
  d.X.resize(n, 2);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    double x = rng.next_uniform(0, 2);
    double e = rng.next_normal();
    d.X(i, 0) = 1.0;
    d.X(i, 1) = x;
    d.y(i) = 2.0 + 3.0 * x + (1.0 + x) * e;
    d.row_keys.push_back(std::to_string(i));
  }
  return d;
}

} // namespace voltrip
