#include "voltrip/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <omp.h>

#include "voltrip/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace voltrip {

namespace {
constexpr const char* kVersion = "0.1.0";

json schema_to_json(const SchemaMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

SchemaMap schema_from_json(const json& j, SchemaMap fallback) {
  if (j.is_null()) return fallback;
  SchemaMap m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<std::string>();
  return m;
}

std::string mode_name(ZeroSpeedMode m) {
  switch (m) {
    case ZeroSpeedMode::DropPair: return "drop_pair";
    case ZeroSpeedMode::FloorEpsilon: return "floor_epsilon";
    case ZeroSpeedMode::Error: return "error";
  }
  return "drop_pair";
}

ZeroSpeedMode mode_from_name(const std::string& s) {
  if (s == "drop_pair") return ZeroSpeedMode::DropPair;
  if (s == "floor_epsilon") return ZeroSpeedMode::FloorEpsilon;
  if (s == "error") return ZeroSpeedMode::Error;
  throw DataError("unknown zero-speed mode: " + s);
}

} // namespace

std::string RunConfig::to_json() const {
  json j;
  j["cycles_path"] = cycles_path;
  j["trips_path"] = trips_path;
  j["vehicles_path"] = vehicles_path;
  j["persons_path"] = persons_path;
  j["output_dir"] = output_dir;
  j["cycles_schema"] = schema_to_json(cycles_schema);
  j["trips_schema"] = schema_to_json(trips_schema);
  j["vehicles_schema"] = schema_to_json(vehicles_schema);
  j["persons_schema"] = schema_to_json(persons_schema);
  j["zero_speed"]["mode"] = mode_name(zero_speed.mode);
  j["zero_speed"]["epsilon_mph"] = zero_speed.epsilon_mph;
  j["min_returns"] = min_returns;
  j["model"]["dependent"] = model.dependent;
  j["model"]["continuous"] = model.continuous;
  json cats = json::array();
  for (const auto& c : model.categorical)
    cats.push_back({{"column", c.column}, {"categories", c.categories}, {"base", c.base}});
  j["model"]["categorical"] = cats;
  j["model"]["quantiles"] = model.quantiles;
  j["bootstrap_b"] = bootstrap_b;
  j["seed"] = seed;
  j["format"] = format;
  j["threads"] = threads;
  j["synth"]["n_trips"] = synth.n_trips;
  j["synth"]["seed"] = synth.seed;
  j["synth"]["noise_kind"] = synth.noise_kind;
  j["synth"]["noise_sd"] = synth.noise_sd;
  j["synth"]["noise_covariate"] = synth.noise_covariate;
  j["synth"]["beta"] = synth.beta;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  RunConfig c;
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("cycles_path", c.cycles_path);
  get("trips_path", c.trips_path);
  get("vehicles_path", c.vehicles_path);
  get("persons_path", c.persons_path);
  get("output_dir", c.output_dir);
  c.cycles_schema = schema_from_json(j.value("cycles_schema", json()), default_cycles_schema());
  c.trips_schema = schema_from_json(j.value("trips_schema", json()), default_trips_schema());
  c.vehicles_schema = schema_from_json(j.value("vehicles_schema", json()), default_vehicles_schema());
  c.persons_schema = schema_from_json(j.value("persons_schema", json()), default_persons_schema());
  if (j.contains("zero_speed")) {
    c.zero_speed.mode = mode_from_name(j["zero_speed"].value("mode", "drop_pair"));
    c.zero_speed.epsilon_mph = j["zero_speed"].value("epsilon_mph", 0.1);
  }
  get("min_returns", c.min_returns);
  if (j.contains("model")) {
    const json& m = j["model"];
    c.model.dependent = m.value("dependent", c.model.dependent);
    if (m.contains("continuous")) c.model.continuous = m["continuous"].get<std::vector<std::string>>();
    if (m.contains("categorical")) {
      c.model.categorical.clear();
      for (const auto& e : m["categorical"])
        c.model.categorical.push_back({e.at("column").get<std::string>(),
                                       e.at("categories").get<std::vector<std::string>>(),
                                       e.at("base").get<std::string>()});
    }
    if (m.contains("quantiles")) c.model.quantiles = m["quantiles"].get<std::vector<double>>();
  }
  get("bootstrap_b", c.bootstrap_b);
  get("seed", c.seed);
  get("format", c.format);
  get("threads", c.threads);
  if (j.contains("synth")) {
    const json& s = j["synth"];
    c.synth.n_trips = s.value("n_trips", c.synth.n_trips);
    c.synth.seed = s.value("seed", c.synth.seed);
    c.synth.noise_kind = s.value("noise_kind", c.synth.noise_kind);
    c.synth.noise_sd = s.value("noise_sd", c.synth.noise_sd);
    c.synth.noise_covariate = s.value("noise_covariate", c.synth.noise_covariate);
    if (s.contains("beta")) c.synth.beta = s["beta"].get<std::vector<double>>();
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

ReportFormat RunConfig::report_format() const {
  if (format == "text") return ReportFormat::Text;
  if (format == "csv") return ReportFormat::Csv;
  if (format == "json") return ReportFormat::Json;
  throw DataError("unknown format: " + format);
}

Eigen::VectorXd default_ground_truth() {
  // intercept, 9 continuous, 9 body, 2 transmission, 2 powertrain, 7 age
  std::vector<double> b = {
      13.0,
      -0.33, -0.01, 0.0, -0.14, 0.28, -0.70, 0.07, 0.34, 0.15,
      0.03, -0.67, 0.23, -0.07, -0.18, 0.32, -0.17, -0.25, -0.40,
      -0.30, 0.10,
      0.0, -0.42,
      -0.13, -0.23, -0.21, -0.39, -0.59, -0.60, -0.99};
  return Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
}

std::string config_hash(const RunConfig& config) {
  std::string s = config.to_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open input file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_threads(const RunConfig& config) {
  if (config.threads > 0) omp_set_num_threads(config.threads);
}

std::string metadata_line(const RunConfig& config) {
  return std::string("# voltrip ") + kVersion + " config=" + config_hash(config);
}

std::string out_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.output_dir);
  return (fs::path(config.output_dir) / name).string();
}

std::string ext(const RunConfig& config) {
  if (config.format == "text") return ".txt";
  if (config.format == "json") return ".json";
  return ".csv";
}

void write_manifest(const RunConfig& config) {
  json m;
  m["tool"] = "voltrip";
  m["version"] = kVersion;
  m["config_hash"] = config_hash(config);
  json digests = json::object();
  for (const auto& p : {config.cycles_path, config.trips_path,
                        config.vehicles_path, config.persons_path})
    if (!p.empty() && fs::exists(p)) digests[p] = hex64(fnv1a_file(p));
  m["input_digests"] = digests;
  m["timestamp"] = static_cast<long long>(std::time(nullptr));
  write_output(out_path(config, "manifest.json"), m.dump(2));
}

} // namespace

void write_output(const std::string& path, const std::string& content,
                  const std::string& metadata) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write output file: " + tmp);
    if (!metadata.empty()) out << metadata << '\n';
    out << content;
    if (!out) throw Error("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

void run_synth(const RunConfig& config) {
  Eigen::VectorXd beta;
  if (config.synth.beta.empty()) {
    beta = default_ground_truth();
  } else {
    beta = Eigen::Map<const Eigen::VectorXd>(
        config.synth.beta.data(), static_cast<Eigen::Index>(config.synth.beta.size()));
  }
  NoiseModel noise;
  if (config.synth.noise_kind == "none") noise.kind = NoiseKind::None;
  else if (config.synth.noise_kind == "gaussian") noise.kind = NoiseKind::Gaussian;
  else if (config.synth.noise_kind == "heteroskedastic") noise.kind = NoiseKind::Heteroskedastic;
  else throw DataError("unknown noise kind: " + config.synth.noise_kind);
  noise.sd = config.synth.noise_sd;
  noise.covariate = config.synth.noise_covariate;

  SynthDataset ds = gen_dataset(config.synth.n_trips, beta, noise, config.synth.seed);
  write_output(out_path(config, "cycles.csv"), ds.cycles_csv);
  write_output(out_path(config, "trips.csv"), ds.trips_csv);
  write_output(out_path(config, "vehicles.csv"), ds.vehicles_csv);
  write_output(out_path(config, "persons.csv"), ds.persons_csv);
  write_output(out_path(config, "synth_manifest.json"), ds.manifest_json);
}

VolatilityBatch run_volatility(const RunConfig& config) {
  apply_threads(config);
  std::ifstream in(config.cycles_path);
  if (!in) throw SchemaError("cannot open cycles file: " + config.cycles_path);
  CyclesParse parsed = parse_cycles(in, config.cycles_schema);
  VolatilityBatch batch =
      trip_volatilities(parsed.cycles, config.zero_speed, config.min_returns);
  std::string meta = metadata_line(config);
  write_output(out_path(config, "volatility.csv"), batch.to_csv(), meta);
  write_output(out_path(config, "exclusions.csv"), batch.exclusions_csv(), meta);
  write_output(out_path(config, "cycle_rejects.csv"), parsed.rejects.to_csv(), meta);
  return batch;
}

std::vector<AnalysisRow> load_analysis_rows(const RunConfig& config,
                                            const VolatilityBatch& batch) {
  std::ifstream trips_in(config.trips_path);
  if (!trips_in) throw SchemaError("cannot open trips file: " + config.trips_path);
  std::ifstream veh_in(config.vehicles_path);
  if (!veh_in) throw SchemaError("cannot open vehicles file: " + config.vehicles_path);
  std::ifstream per_in(config.persons_path);
  if (!per_in) throw SchemaError("cannot open persons file: " + config.persons_path);

  auto trips = parse_trips(trips_in, config.trips_schema);
  auto vehicles = parse_vehicles(veh_in, config.vehicles_schema);
  auto persons = parse_persons(per_in, config.persons_schema);

  JoinResult joined = join_dataset(batch.as_map(), trips.records, vehicles.records,
                                   persons.records);
  ImputeResult imputed = impute_means(joined.rows);

  json report;
  report["join"] = {{"matched", joined.report.matched},
                    {"missing_volatility", joined.report.missing_volatility},
                    {"missing_trip_summary", joined.report.missing_trip_summary},
                    {"missing_vehicle", joined.report.missing_vehicle},
                    {"missing_person", joined.report.missing_person}};
  json imp = json::array();
  for (const auto& c : imputed.report.columns)
    imp.push_back({{"column", c.column}, {"count", c.count},
                   {"fill_value", c.fill_value}, {"rule", c.rule}});
  report["imputation"] = imp;
  write_output(out_path(config, "join_report.json"), report.dump(2));
  return imputed.rows;
}

namespace {

std::vector<AnalysisRow> assemble(const RunConfig& config) {
  VolatilityBatch batch = run_volatility(config);
  return load_analysis_rows(config, batch);
}

std::vector<DescriptiveRow> descriptive_rows(const std::vector<AnalysisRow>& rows) {
  std::vector<DescriptiveRow> out;
  std::vector<double> vol;
  for (const auto& r : rows) vol.push_back(r.volatility_pct);
  out.push_back({"volatility_pct", describe(vol)});
  for (const auto& name : continuous_field_names()) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(continuous_field(r, name));
    out.push_back({name, describe(col)});
  }
  return out;
}

} // namespace

void run_describe(const RunConfig& config) {
  apply_threads(config);
  std::vector<AnalysisRow> rows = assemble(config);
  if (rows.empty()) throw DataError("describe: no joined rows");
  std::string meta = metadata_line(config);
  write_output(out_path(config, std::string("descriptive") + ext(config)),
               render_descriptive(descriptive_rows(rows), config.report_format()),
               config.format == "json" ? "" : meta);
  std::vector<double> vol;
  for (const auto& r : rows) vol.push_back(r.volatility_pct);
  write_output(out_path(config, "histogram.csv"), histogram(vol).to_csv(), meta);
  write_manifest(config);
}

void run_fit(const RunConfig& config) {
  apply_threads(config);
  std::vector<AnalysisRow> rows = assemble(config);
  DesignMatrix design = build_design(rows, config.model);

  std::vector<FitResult> fits;
  fits.push_back(fit_ols(design));
  for (std::size_t qi = 0; qi < config.model.quantiles.size(); ++qi) {
    double q = config.model.quantiles[qi];
    FitResult fit = fit_quantile(design, q);
    attach_bootstrap(fit, bootstrap_se(design, q, config.bootstrap_b, config.seed + qi));
    fits.push_back(std::move(fit));
  }

  json all = json::array();
  for (const auto& f : fits) all.push_back(json::parse(f.to_json()));
  write_output(out_path(config, "fits.json"), all.dump(2));
  std::string meta = metadata_line(config);
  write_output(out_path(config, std::string("coefficients") + ext(config)),
               render_coefficients(fits, config.model, config.report_format()),
               config.format == "json" ? "" : meta);
  write_manifest(config);
}

void run_profile(const RunConfig& config) {
  apply_threads(config);
  std::vector<AnalysisRow> rows = assemble(config);
  DesignMatrix design = build_design(rows, config.model);
  QuantileProfile profile = quantile_profile(design, config.model.quantiles,
                                             config.bootstrap_b, config.seed);
  write_output(out_path(config, "profile.csv"), export_profile(profile),
               metadata_line(config));
  write_manifest(config);
}

void run_pipeline(const RunConfig& config) {
  apply_threads(config);
  VolatilityBatch batch = run_volatility(config);
  std::vector<AnalysisRow> rows = load_analysis_rows(config, batch);
  if (rows.empty()) throw DataError("pipeline: no joined rows");
  std::string meta = metadata_line(config);

  write_output(out_path(config, std::string("descriptive") + ext(config)),
               render_descriptive(descriptive_rows(rows), config.report_format()),
               config.format == "json" ? "" : meta);
  std::vector<double> vol;
  for (const auto& r : rows) vol.push_back(r.volatility_pct);
  write_output(out_path(config, "histogram.csv"), histogram(vol).to_csv(), meta);

  DesignMatrix design = build_design(rows, config.model);
  std::vector<FitResult> fits;
  fits.push_back(fit_ols(design));
  QuantileProfile profile = quantile_profile(design, config.model.quantiles,
                                             config.bootstrap_b, config.seed);
  for (const auto& f : profile.fits) fits.push_back(f);

  json all = json::array();
  for (const auto& f : fits) all.push_back(json::parse(f.to_json()));
  write_output(out_path(config, "fits.json"), all.dump(2));
  write_output(out_path(config, std::string("coefficients") + ext(config)),
               render_coefficients(fits, config.model, config.report_format()),
               config.format == "json" ? "" : meta);
  write_output(out_path(config, "profile.csv"), export_profile(profile), meta);
  write_manifest(config);
}

} // namespace voltrip
