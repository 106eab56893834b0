#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace voltrip {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct SpeedSample {
  long long t = 0;       // elapsed seconds, strictly increasing within a trip
  double speed_mph = 0;  // finite, >= 0

  bool operator==(const SpeedSample&) const = default;
};

struct DrivingCycle {
  std::string trip_id;
  std::vector<SpeedSample> samples; // sorted by t

  bool operator==(const DrivingCycle&) const = default;
};

enum class BodyType {
  Sedan, SUV, Pickup, Coupe, Convertible, Hatchback, Wagon, Minivan, Van, Other
};
enum class Transmission { Automatic, Manual, Both };
enum class Powertrain { FrontWheel, RearWheel, FourWheel };
enum class AgeBand { A10_19, A20_29, A30_39, A40_49, A50_59, A60_69, A70_79, A80_89 };

const std::vector<std::string>& body_type_codes();     // sedan, suv, ...
const std::vector<std::string>& transmission_codes();  // auto, manual, both
const std::vector<std::string>& powertrain_codes();    // fwd, rwd, 4wd
const std::vector<std::string>& age_band_labels();     // 10-19, ...

std::string to_code(BodyType v);
std::string to_code(Transmission v);
std::string to_code(Powertrain v);
std::string to_label(AgeBand v);
std::optional<BodyType> body_type_from_code(const std::string& code);
std::optional<Transmission> transmission_from_code(const std::string& code);
std::optional<Powertrain> powertrain_from_code(const std::string& code);
AgeBand age_band_from_years(long long age_years);

struct TripSummary {
  std::string trip_id;
  std::string household_id;
  std::string vehicle_id;
  std::optional<double> distance_mi;
  std::optional<double> travel_time_min;
  std::optional<double> avg_speed_mph;
  std::optional<double> n_stops;
  std::optional<double> grade_sd;

  bool operator==(const TripSummary&) const = default;
};

struct VehicleRecord {
  std::string vehicle_id;
  std::string household_id;
  std::string driver_person_id; // the person assigned to this vehicle
  std::optional<double> is_afv; // 0/1
  std::optional<BodyType> body_type;
  std::optional<Transmission> transmission;
  std::optional<double> vehicle_age_years;
  std::optional<double> n_cylinders;
  std::optional<Powertrain> powertrain;
  std::optional<double> ownership_nonowned; // 0/1

  bool operator==(const VehicleRecord&) const = default;
};

struct PersonRecord {
  std::string person_id;
  std::string household_id;
  std::optional<double> is_female; // 0/1
  std::optional<AgeBand> age_band;
  std::optional<double> not_employed; // 0/1

  bool operator==(const PersonRecord&) const = default;
};

/// One trip's joined record. Optional fields are missing until imputation.
struct AnalysisRow {
  std::string trip_id;
  double volatility_pct = 0;

  std::optional<double> distance_mi, travel_time_min, avg_speed_mph, n_stops,
      grade_sd;
  std::optional<double> is_afv, vehicle_age_years, n_cylinders,
      ownership_nonowned;
  std::optional<BodyType> body_type;
  std::optional<Transmission> transmission;
  std::optional<Powertrain> powertrain;
  std::optional<double> is_female, not_employed;
  std::optional<AgeBand> age_band;

  std::map<std::string, bool> imputed_flags; // field name -> was imputed

  bool operator==(const AnalysisRow&) const = default;
};

/// Names of AnalysisRow fields, in declaration order.
const std::vector<std::string>& continuous_field_names();
const std::vector<std::string>& categorical_field_names();

double continuous_field(const AnalysisRow& row, const std::string& name);
std::string categorical_field(const AnalysisRow& row, const std::string& name);

// ---------------------------------------------------------------------------
// Parse reports
// ---------------------------------------------------------------------------

struct Reject {
  std::size_t row_number = 0;
  std::string reason;
  std::string raw_line;
};

struct RejectsReport {
  std::vector<Reject> rejects;
  std::size_t count() const { return rejects.size(); }
  std::string to_csv() const;
};

struct JoinReport {
  std::size_t matched = 0;
  std::size_t missing_volatility = 0;   // trip summary without a volatility
  std::size_t missing_trip_summary = 0; // volatility without a trip summary
  std::size_t missing_vehicle = 0;
  std::size_t missing_person = 0;
};

struct ImputationColumn {
  std::string column;
  std::size_t count = 0;
  std::string fill_value;
  std::string rule; // "mean" | "mode"
};

struct ImputationReport {
  std::vector<ImputationColumn> columns;
  std::size_t total() const;
};

// ---------------------------------------------------------------------------
// Schema maps: logical field name -> actual CSV column name
// ---------------------------------------------------------------------------

using SchemaMap = std::map<std::string, std::string>;

SchemaMap default_cycles_schema();  // trip_id, t_sec, speed_mph
SchemaMap default_trips_schema();
SchemaMap default_vehicles_schema();
SchemaMap default_persons_schema();

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct CyclesParse {
  std::vector<DrivingCycle> cycles; // sorted by trip_id
  RejectsReport rejects;
  std::size_t duplicate_timestamps_dropped = 0;
};

CyclesParse parse_cycles(std::istream& in, const SchemaMap& schema = default_cycles_schema());

template <class Record>
struct TableParse {
  std::vector<Record> records;
  RejectsReport rejects;
};

TableParse<TripSummary> parse_trips(std::istream& in, const SchemaMap& schema = default_trips_schema());
TableParse<VehicleRecord> parse_vehicles(std::istream& in, const SchemaMap& schema = default_vehicles_schema());
TableParse<PersonRecord> parse_persons(std::istream& in, const SchemaMap& schema = default_persons_schema());

std::string serialize_trips(const std::vector<TripSummary>& records);
std::string serialize_vehicles(const std::vector<VehicleRecord>& records);
std::string serialize_persons(const std::vector<PersonRecord>& records);
std::string serialize_cycles(const std::vector<DrivingCycle>& cycles);

struct JoinResult {
  std::vector<AnalysisRow> rows; // sorted by trip_id
  JoinReport report;
};

JoinResult join_dataset(const std::map<std::string, double>& volatilities,
                        const std::vector<TripSummary>& trips,
                        const std::vector<VehicleRecord>& vehicles,
                        const std::vector<PersonRecord>& persons);

struct ImputeResult {
  std::vector<AnalysisRow> rows;
  ImputationReport report;
};

ImputeResult impute_means(const std::vector<AnalysisRow>& rows);

} // namespace voltrip
