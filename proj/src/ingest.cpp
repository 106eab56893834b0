#include "voltrip/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "voltrip/csv.hpp"
#include "voltrip/error.hpp"

namespace voltrip {

// ---------------------------------------------------------------------------
// Category coding tables
// ---------------------------------------------------------------------------

const std::vector<std::string>& body_type_codes() {
  static const std::vector<std::string> v = {
      "sedan", "suv", "pickup", "coupe", "convertible",
      "hatchback", "wagon", "minivan", "van", "other"};
  return v;
}

const std::vector<std::string>& transmission_codes() {
  static const std::vector<std::string> v = {"auto", "manual", "both"};
  return v;
}

const std::vector<std::string>& powertrain_codes() {
  static const std::vector<std::string> v = {"fwd", "rwd", "4wd"};
  return v;
}

const std::vector<std::string>& age_band_labels() {
  static const std::vector<std::string> v = {"10-19", "20-29", "30-39",
                                             "40-49", "50-59", "60-69",
                                             "70-79", "80-89"};
  return v;
}

std::string to_code(BodyType v) { return body_type_codes()[static_cast<int>(v)]; }
std::string to_code(Transmission v) { return transmission_codes()[static_cast<int>(v)]; }
std::string to_code(Powertrain v) { return powertrain_codes()[static_cast<int>(v)]; }
std::string to_label(AgeBand v) { return age_band_labels()[static_cast<int>(v)]; }

namespace {

template <class E>
std::optional<E> from_code(const std::vector<std::string>& codes, const std::string& code) {
  for (std::size_t i = 0; i < codes.size(); ++i)
    if (codes[i] == code) return static_cast<E>(i);
  return std::nullopt;
}

} // namespace

std::optional<BodyType> body_type_from_code(const std::string& code) {
  return from_code<BodyType>(body_type_codes(), code);
}
std::optional<Transmission> transmission_from_code(const std::string& code) {
  return from_code<Transmission>(transmission_codes(), code);
}
std::optional<Powertrain> powertrain_from_code(const std::string& code) {
  return from_code<Powertrain>(powertrain_codes(), code);
}

AgeBand age_band_from_years(long long age_years) {
  long long decade = age_years / 10;
  if (decade < 1 || decade > 8)
    throw DataError("age out of banded range: " + std::to_string(age_years));
  return static_cast<AgeBand>(decade - 1);
}

// ---------------------------------------------------------------------------
// Field registry
// ---------------------------------------------------------------------------

const std::vector<std::string>& continuous_field_names() {
  static const std::vector<std::string> v = {
      "distance_mi", "travel_time_min", "avg_speed_mph", "n_stops",
      "grade_sd",    "is_afv",          "vehicle_age_years", "n_cylinders",
      "ownership_nonowned", "is_female", "not_employed"};
  return v;
}

const std::vector<std::string>& categorical_field_names() {
  static const std::vector<std::string> v = {"body_type", "transmission",
                                             "powertrain", "age_band"};
  return v;
}

namespace {

std::optional<double>* continuous_slot(AnalysisRow& row, const std::string& name) {
  if (name == "distance_mi") return &row.distance_mi;
  if (name == "travel_time_min") return &row.travel_time_min;
  if (name == "avg_speed_mph") return &row.avg_speed_mph;
  if (name == "n_stops") return &row.n_stops;
  if (name == "grade_sd") return &row.grade_sd;
  if (name == "is_afv") return &row.is_afv;
  if (name == "vehicle_age_years") return &row.vehicle_age_years;
  if (name == "n_cylinders") return &row.n_cylinders;
  if (name == "ownership_nonowned") return &row.ownership_nonowned;
  if (name == "is_female") return &row.is_female;
  if (name == "not_employed") return &row.not_employed;
  return nullptr;
}

/// Categorical fields as an index into their declared category list.
std::optional<int> categorical_index(const AnalysisRow& row, const std::string& name) {
  if (name == "body_type")
    return row.body_type ? std::optional<int>(static_cast<int>(*row.body_type)) : std::nullopt;
  if (name == "transmission")
    return row.transmission ? std::optional<int>(static_cast<int>(*row.transmission)) : std::nullopt;
  if (name == "powertrain")
    return row.powertrain ? std::optional<int>(static_cast<int>(*row.powertrain)) : std::nullopt;
  if (name == "age_band")
    return row.age_band ? std::optional<int>(static_cast<int>(*row.age_band)) : std::nullopt;
  throw DataError("unknown categorical field: " + name);
}

void set_categorical_index(AnalysisRow& row, const std::string& name, int idx) {
  if (name == "body_type") row.body_type = static_cast<BodyType>(idx);
  else if (name == "transmission") row.transmission = static_cast<Transmission>(idx);
  else if (name == "powertrain") row.powertrain = static_cast<Powertrain>(idx);
  else if (name == "age_band") row.age_band = static_cast<AgeBand>(idx);
  else throw DataError("unknown categorical field: " + name);
}

const std::vector<std::string>& category_list(const std::string& name) {
  if (name == "body_type") return body_type_codes();
  if (name == "transmission") return transmission_codes();
  if (name == "powertrain") return powertrain_codes();
  if (name == "age_band") return age_band_labels();
  throw DataError("unknown categorical field: " + name);
}

} // namespace

double continuous_field(const AnalysisRow& row, const std::string& name) {
  auto* slot = continuous_slot(const_cast<AnalysisRow&>(row), name);
  if (!slot) throw DataError("unknown continuous field: " + name);
  if (!slot->has_value())
    throw DataError("field " + name + " missing on trip " + row.trip_id);
  return **slot;
}

std::string categorical_field(const AnalysisRow& row, const std::string& name) {
  auto idx = categorical_index(row, name);
  if (!idx)
    throw DataError("field " + name + " missing on trip " + row.trip_id);
  return category_list(name)[static_cast<std::size_t>(*idx)];
}

// ---------------------------------------------------------------------------
// Schema maps
// ---------------------------------------------------------------------------

namespace {
SchemaMap identity(std::initializer_list<const char*> names) {
  SchemaMap m;
  for (const char* n : names) m[n] = n;
  return m;
}
} // namespace

SchemaMap default_cycles_schema() {
  return identity({"trip_id", "t_sec", "speed_mph"});
}
SchemaMap default_trips_schema() {
  return identity({"trip_id", "household_id", "vehicle_id", "distance_mi",
                   "travel_time_min", "avg_speed_mph", "n_stops", "grade_sd"});
}
SchemaMap default_vehicles_schema() {
  return identity({"vehicle_id", "household_id", "driver_person_id", "afv",
                   "body", "transmission", "veh_age", "cylinders", "powertrain",
                   "nonowned"});
}
SchemaMap default_persons_schema() {
  return identity({"person_id", "household_id", "female", "age_years",
                   "not_employed"});
}

namespace {

std::size_t mapped_column(const csv::Table& t, const SchemaMap& schema,
                          const std::string& logical) {
  auto it = schema.find(logical);
  if (it == schema.end())
    throw SchemaError("schema map does not name the '" + logical + "' column");
  auto idx = t.column(it->second);
  if (!idx)
    throw SchemaError("input is missing column '" + it->second + "' (mapped from '" + logical + "')");
  return *idx;
}

} // namespace

// ---------------------------------------------------------------------------
// parse_cycles
// ---------------------------------------------------------------------------

CyclesParse parse_cycles(std::istream& in, const SchemaMap& schema) {
  csv::Table t = csv::read(in);
  CyclesParse out;
  if (t.header.empty() && t.rows.empty()) return out;

  std::size_t id_col = mapped_column(t, schema, "trip_id");
  std::size_t t_col = mapped_column(t, schema, "t_sec");
  std::size_t v_col = mapped_column(t, schema, "speed_mph");

  std::map<std::string, std::vector<SpeedSample>> by_trip;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto reject = [&](const std::string& reason) {
      out.rejects.rejects.push_back({t.row_numbers[r], reason, t.raw_lines[r]});
    };
    std::size_t need = std::max({id_col, t_col, v_col});
    if (row.size() <= need) {
      reject("too few fields");
      continue;
    }
    const std::string& id = row[id_col];
    if (id.empty()) {
      reject("empty trip_id");
      continue;
    }
    auto ts = csv::parse_int(row[t_col]);
    if (!ts || *ts < 0) {
      reject("unparseable or negative t_sec: " + row[t_col]);
      continue;
    }
    auto sp = csv::parse_double(row[v_col]);
    if (!sp || !std::isfinite(*sp)) {
      reject("unparseable speed: " + row[v_col]);
      continue;
    }
    if (*sp < 0) {
      reject("negative speed: " + row[v_col]);
      continue;
    }
    by_trip[id].push_back({*ts, *sp});
  }

  for (auto& [id, samples] : by_trip) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const SpeedSample& a, const SpeedSample& b) { return a.t < b.t; });
    // duplicate timestamps: keep the first, count the rest
    std::vector<SpeedSample> dedup;
    dedup.reserve(samples.size());
    for (const auto& s : samples) {
      if (!dedup.empty() && dedup.back().t == s.t) {
        ++out.duplicate_timestamps_dropped;
        continue;
      }
      dedup.push_back(s);
    }
    out.cycles.push_back({id, std::move(dedup)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// parse_tables
// ---------------------------------------------------------------------------

namespace {

/// Parses a numeric cell: missing marker -> nullopt; garbage -> reject.
struct RowReader {
  const std::vector<std::string>& row;
  bool ok = true;
  std::string reason;

  std::string id(std::size_t col) { return col < row.size() ? row[col] : ""; }

  std::optional<double> number(std::size_t col, const std::string& what) {
    if (col >= row.size() || csv::is_missing(row[col])) return std::nullopt;
    auto v = csv::parse_double(row[col]);
    if (!v || !std::isfinite(*v)) fail("unparseable " + what + ": " + row[col]);
    return v;
  }

  std::optional<double> flag01(std::size_t col, const std::string& what) {
    if (col >= row.size() || csv::is_missing(row[col])) return std::nullopt;
    if (row[col] == "0") return 0.0;
    if (row[col] == "1") return 1.0;
    fail("expected 0/1 for " + what + ": " + row[col]);
    return std::nullopt;
  }

  void fail(const std::string& r) {
    ok = false;
    if (reason.empty()) reason = r;
  }
};

} // namespace

TableParse<TripSummary> parse_trips(std::istream& in, const SchemaMap& schema) {
  csv::Table t = csv::read(in);
  TableParse<TripSummary> out;
  if (t.header.empty() && t.rows.empty()) return out;

  std::size_t c_trip = mapped_column(t, schema, "trip_id");
  std::size_t c_hh = mapped_column(t, schema, "household_id");
  std::size_t c_veh = mapped_column(t, schema, "vehicle_id");
  std::size_t c_dist = mapped_column(t, schema, "distance_mi");
  std::size_t c_time = mapped_column(t, schema, "travel_time_min");
  std::size_t c_spd = mapped_column(t, schema, "avg_speed_mph");
  std::size_t c_stops = mapped_column(t, schema, "n_stops");
  std::size_t c_grade = mapped_column(t, schema, "grade_sd");

  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RowReader rd{t.rows[r]};
    TripSummary rec;
    rec.trip_id = rd.id(c_trip);
    rec.household_id = rd.id(c_hh);
    rec.vehicle_id = rd.id(c_veh);
    if (rec.trip_id.empty()) rd.fail("empty trip_id");
    rec.distance_mi = rd.number(c_dist, "distance_mi");
    rec.travel_time_min = rd.number(c_time, "travel_time_min");
    rec.avg_speed_mph = rd.number(c_spd, "avg_speed_mph");
    rec.n_stops = rd.number(c_stops, "n_stops");
    rec.grade_sd = rd.number(c_grade, "grade_sd");
    if (rec.distance_mi && *rec.distance_mi < 0) rd.fail("negative distance");
    if (rec.travel_time_min && *rec.travel_time_min <= 0) rd.fail("non-positive travel time");
    if (rec.avg_speed_mph && *rec.avg_speed_mph <= 0) rd.fail("non-positive avg speed");
    if (rec.n_stops && *rec.n_stops < 1) rd.fail("n_stops below 1");
    if (rec.grade_sd && *rec.grade_sd < 0) rd.fail("negative grade_sd");
    if (!rd.ok) {
      out.rejects.rejects.push_back({t.row_numbers[r], rd.reason, t.raw_lines[r]});
      continue;
    }
    if (!seen.insert(rec.trip_id).second)
      throw DuplicateKeyError("duplicate trip_id: " + rec.trip_id);
    out.records.push_back(std::move(rec));
  }
  return out;
}

TableParse<VehicleRecord> parse_vehicles(std::istream& in, const SchemaMap& schema) {
  csv::Table t = csv::read(in);
  TableParse<VehicleRecord> out;
  if (t.header.empty() && t.rows.empty()) return out;

  std::size_t c_veh = mapped_column(t, schema, "vehicle_id");
  std::size_t c_hh = mapped_column(t, schema, "household_id");
  std::size_t c_drv = mapped_column(t, schema, "driver_person_id");
  std::size_t c_afv = mapped_column(t, schema, "afv");
  std::size_t c_body = mapped_column(t, schema, "body");
  std::size_t c_trans = mapped_column(t, schema, "transmission");
  std::size_t c_age = mapped_column(t, schema, "veh_age");
  std::size_t c_cyl = mapped_column(t, schema, "cylinders");
  std::size_t c_pt = mapped_column(t, schema, "powertrain");
  std::size_t c_own = mapped_column(t, schema, "nonowned");

  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RowReader rd{t.rows[r]};
    VehicleRecord rec;
    rec.vehicle_id = rd.id(c_veh);
    rec.household_id = rd.id(c_hh);
    rec.driver_person_id = rd.id(c_drv);
    if (rec.vehicle_id.empty()) rd.fail("empty vehicle_id");
    rec.is_afv = rd.flag01(c_afv, "afv");
    // unknown category codes become missing, not rejects
    if (c_body < t.rows[r].size() && !csv::is_missing(t.rows[r][c_body]))
      rec.body_type = body_type_from_code(t.rows[r][c_body]);
    if (c_trans < t.rows[r].size() && !csv::is_missing(t.rows[r][c_trans]))
      rec.transmission = transmission_from_code(t.rows[r][c_trans]);
    if (c_pt < t.rows[r].size() && !csv::is_missing(t.rows[r][c_pt]))
      rec.powertrain = powertrain_from_code(t.rows[r][c_pt]);
    rec.vehicle_age_years = rd.number(c_age, "veh_age");
    rec.n_cylinders = rd.number(c_cyl, "cylinders");
    rec.ownership_nonowned = rd.flag01(c_own, "nonowned");
    if (rec.vehicle_age_years && *rec.vehicle_age_years < 0) rd.fail("negative veh_age");
    if (rec.n_cylinders && *rec.n_cylinders < 0) rd.fail("negative cylinders");
    if (!rd.ok) {
      out.rejects.rejects.push_back({t.row_numbers[r], rd.reason, t.raw_lines[r]});
      continue;
    }
    if (!seen.insert(rec.vehicle_id).second)
      throw DuplicateKeyError("duplicate vehicle_id: " + rec.vehicle_id);
    out.records.push_back(std::move(rec));
  }
  return out;
}

TableParse<PersonRecord> parse_persons(std::istream& in, const SchemaMap& schema) {
  csv::Table t = csv::read(in);
  TableParse<PersonRecord> out;
  if (t.header.empty() && t.rows.empty()) return out;

  std::size_t c_pid = mapped_column(t, schema, "person_id");
  std::size_t c_hh = mapped_column(t, schema, "household_id");
  std::size_t c_fem = mapped_column(t, schema, "female");
  std::size_t c_age = mapped_column(t, schema, "age_years");
  std::size_t c_emp = mapped_column(t, schema, "not_employed");

  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RowReader rd{t.rows[r]};
    PersonRecord rec;
    rec.person_id = rd.id(c_pid);
    rec.household_id = rd.id(c_hh);
    if (rec.person_id.empty()) rd.fail("empty person_id");
    rec.is_female = rd.flag01(c_fem, "female");
    if (auto age = rd.number(c_age, "age_years")) {
      long long yrs = static_cast<long long>(*age);
      long long decade = yrs / 10;
      if (decade >= 1 && decade <= 8)
        rec.age_band = static_cast<AgeBand>(decade - 1);
      // out-of-band ages stay missing (imputation candidate)
    }
    rec.not_employed = rd.flag01(c_emp, "not_employed");
    if (!rd.ok) {
      out.rejects.rejects.push_back({t.row_numbers[r], rd.reason, t.raw_lines[r]});
      continue;
    }
    std::string key = rec.household_id + "\x1f" + rec.person_id;
    if (!seen.insert(key).second)
      throw DuplicateKeyError("duplicate person: " + rec.person_id +
                              " in household " + rec.household_id);
    out.records.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization (round-trip counterpart of the parsers)
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }
std::string opt01(const std::optional<double>& v) {
  return v ? (*v != 0 ? "1" : "0") : "";
}

} // namespace

std::string serialize_trips(const std::vector<TripSummary>& records) {
  std::ostringstream os;
  os << "trip_id,household_id,vehicle_id,distance_mi,travel_time_min,"
        "avg_speed_mph,n_stops,grade_sd\n";
  for (const auto& r : records) {
    os << csv::escape(r.trip_id) << ',' << csv::escape(r.household_id) << ','
       << csv::escape(r.vehicle_id) << ',' << opt(r.distance_mi) << ','
       << opt(r.travel_time_min) << ',' << opt(r.avg_speed_mph) << ','
       << opt(r.n_stops) << ',' << opt(r.grade_sd) << '\n';
  }
  return os.str();
}

std::string serialize_vehicles(const std::vector<VehicleRecord>& records) {
  std::ostringstream os;
  os << "vehicle_id,household_id,driver_person_id,afv,body,transmission,"
        "veh_age,cylinders,powertrain,nonowned\n";
  for (const auto& r : records) {
    os << csv::escape(r.vehicle_id) << ',' << csv::escape(r.household_id) << ','
       << csv::escape(r.driver_person_id) << ',' << opt01(r.is_afv) << ','
       << (r.body_type ? to_code(*r.body_type) : "") << ','
       << (r.transmission ? to_code(*r.transmission) : "") << ','
       << opt(r.vehicle_age_years) << ',' << opt(r.n_cylinders) << ','
       << (r.powertrain ? to_code(*r.powertrain) : "") << ','
       << opt01(r.ownership_nonowned) << '\n';
  }
  return os.str();
}

std::string serialize_persons(const std::vector<PersonRecord>& records) {
  std::ostringstream os;
  os << "person_id,household_id,female,age_years,not_employed\n";
  for (const auto& r : records) {
    // age bands serialize as a representative year inside the band
    std::string age;
    if (r.age_band) age = std::to_string((static_cast<int>(*r.age_band) + 1) * 10 + 5);
    os << csv::escape(r.person_id) << ',' << csv::escape(r.household_id) << ','
       << opt01(r.is_female) << ',' << age << ',' << opt01(r.not_employed) << '\n';
  }
  return os.str();
}

std::string serialize_cycles(const std::vector<DrivingCycle>& cycles) {
  std::ostringstream os;
  os << "trip_id,t_sec,speed_mph\n";
  for (const auto& c : cycles)
    for (const auto& s : c.samples)
      os << csv::escape(c.trip_id) << ',' << s.t << ',' << fmt(s.speed_mph) << '\n';
  return os.str();
}

std::string RejectsReport::to_csv() const {
  std::ostringstream os;
  os << "row_number,reason,raw_line\n";
  for (const auto& r : rejects)
    os << r.row_number << ',' << csv::escape(r.reason) << ','
       << csv::escape(r.raw_line) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// join_dataset
// ---------------------------------------------------------------------------

JoinResult join_dataset(const std::map<std::string, double>& volatilities,
                        const std::vector<TripSummary>& trips,
                        const std::vector<VehicleRecord>& vehicles,
                        const std::vector<PersonRecord>& persons) {
  JoinResult out;

  std::map<std::string, const VehicleRecord*> veh_by_id;
  for (const auto& v : vehicles) veh_by_id[v.vehicle_id] = &v;
  std::map<std::string, const PersonRecord*> person_by_key;
  for (const auto& p : persons)
    person_by_key[p.household_id + "\x1f" + p.person_id] = &p;

  std::set<std::string> trips_seen;
  for (const auto& trip : trips) {
    trips_seen.insert(trip.trip_id);
    auto vol = volatilities.find(trip.trip_id);
    if (vol == volatilities.end()) {
      ++out.report.missing_volatility;
      continue;
    }
    auto veh = veh_by_id.find(trip.vehicle_id);
    if (veh == veh_by_id.end()) {
      ++out.report.missing_vehicle;
      continue;
    }
    const VehicleRecord& v = *veh->second;
    auto person = person_by_key.find(v.household_id + "\x1f" + v.driver_person_id);
    if (person == person_by_key.end()) {
      ++out.report.missing_person;
      continue;
    }
    const PersonRecord& p = *person->second;

    AnalysisRow row;
    row.trip_id = trip.trip_id;
    row.volatility_pct = vol->second;
    row.distance_mi = trip.distance_mi;
    row.travel_time_min = trip.travel_time_min;
    row.avg_speed_mph = trip.avg_speed_mph;
    row.n_stops = trip.n_stops;
    row.grade_sd = trip.grade_sd;
    row.is_afv = v.is_afv;
    row.body_type = v.body_type;
    row.transmission = v.transmission;
    row.vehicle_age_years = v.vehicle_age_years;
    row.n_cylinders = v.n_cylinders;
    row.powertrain = v.powertrain;
    row.ownership_nonowned = v.ownership_nonowned;
    row.is_female = p.is_female;
    row.age_band = p.age_band;
    row.not_employed = p.not_employed;
    out.rows.push_back(std::move(row));
    ++out.report.matched;
  }
  for (const auto& [id, _] : volatilities)
    if (!trips_seen.count(id)) ++out.report.missing_trip_summary;

  std::sort(out.rows.begin(), out.rows.end(),
            [](const AnalysisRow& a, const AnalysisRow& b) { return a.trip_id < b.trip_id; });
  return out;
}

// ---------------------------------------------------------------------------
// impute_means
// ---------------------------------------------------------------------------

ImputeResult impute_means(const std::vector<AnalysisRow>& rows) {
  ImputeResult out;
  out.rows = rows;

  for (const auto& name : continuous_field_names()) {
    double sum = 0;
    std::size_t n = 0, missing = 0;
    for (auto& row : out.rows) {
      auto* slot = continuous_slot(row, name);
      if (slot->has_value()) {
        sum += **slot;
        ++n;
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    if (n == 0) throw DataError("column entirely missing: " + name);
    double mean = sum / static_cast<double>(n);
    for (auto& row : out.rows) {
      auto* slot = continuous_slot(row, name);
      if (!slot->has_value()) {
        *slot = mean;
        row.imputed_flags[name] = true;
      }
    }
    std::ostringstream fv;
    fv.precision(17);
    fv << mean;
    out.report.columns.push_back({name, missing, fv.str(), "mean"});
  }

  for (const auto& name : categorical_field_names()) {
    const auto& cats = category_list(name);
    std::vector<std::size_t> counts(cats.size(), 0);
    std::size_t missing = 0, n = 0;
    for (const auto& row : out.rows) {
      auto idx = categorical_index(row, name);
      if (idx) {
        ++counts[static_cast<std::size_t>(*idx)];
        ++n;
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    if (n == 0) throw DataError("column entirely missing: " + name);
    // mode; ties broken by declaration order (first max wins)
    std::size_t mode = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
      if (counts[i] > counts[mode]) mode = i;
    for (auto& row : out.rows) {
      if (!categorical_index(row, name)) {
        set_categorical_index(row, name, static_cast<int>(mode));
        row.imputed_flags[name] = true;
      }
    }
    out.report.columns.push_back({name, missing, cats[mode], "mode"});
  }
  return out;
}

std::size_t ImputationReport::total() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.count;
  return n;
}

} // namespace voltrip
