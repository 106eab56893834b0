#include "voltrip/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "voltrip/error.hpp"
#include "voltrip/rng.hpp"

namespace voltrip {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kAliasTolerance = 1e-10;
} // namespace

// ---------------------------------------------------------------------------
// ModelSpec
// ---------------------------------------------------------------------------

void ModelSpec::validate() const {
  if (dependent.empty()) throw DataError("model spec: dependent column unset");
  for (const auto& cat : categorical) {
    if (std::find(cat.categories.begin(), cat.categories.end(), cat.base) ==
        cat.categories.end())
      throw DataError("model spec: base category '" + cat.base +
                      "' is not a member of column " + cat.column);
  }
  double prev = 0;
  for (double q : quantiles) {
    if (q <= 0 || q >= 1)
      throw DataError("model spec: quantile outside (0,1)");
    if (q <= prev) throw DataError("model spec: quantiles must be strictly increasing");
    prev = q;
  }
}

ModelSpec default_model_spec() {
  ModelSpec spec;
  spec.dependent = "volatility_pct";
  spec.continuous = {"is_afv",      "vehicle_age_years", "n_cylinders",
                     "distance_mi", "n_stops",           "grade_sd",
                     "is_female",   "ownership_nonowned", "not_employed"};
  spec.categorical = {
      {"body_type", body_type_codes(), "sedan"},
      {"transmission", transmission_codes(), "auto"},
      {"powertrain", powertrain_codes(), "fwd"},
      {"age_band", age_band_labels(), "10-19"},
  };
  spec.quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};
  return spec;
}

// ---------------------------------------------------------------------------
// build_design
// ---------------------------------------------------------------------------

DesignMatrix build_design(const std::vector<AnalysisRow>& rows, const ModelSpec& spec) {
  spec.validate();
  if (rows.empty()) throw DataError("build_design: no rows");

  DesignMatrix d;
  d.column_names.push_back("intercept");
  for (const auto& c : spec.continuous) d.column_names.push_back(c);
  for (const auto& cat : spec.categorical)
    for (const auto& level : cat.categories)
      if (level != cat.base)
        d.column_names.push_back(cat.column + "=" + level);

  auto n = static_cast<Eigen::Index>(rows.size());
  auto p = static_cast<Eigen::Index>(d.column_names.size());
  d.X.setZero(n, p);
  d.y.resize(n);
  d.row_keys.reserve(rows.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    const AnalysisRow& row = rows[static_cast<std::size_t>(i)];
    d.row_keys.push_back(row.trip_id);
    if (spec.dependent == "volatility_pct")
      d.y(i) = row.volatility_pct;
    else
      d.y(i) = continuous_field(row, spec.dependent);

    Eigen::Index col = 0;
    d.X(i, col++) = 1.0;
    for (const auto& c : spec.continuous) d.X(i, col++) = continuous_field(row, c);
    for (const auto& cat : spec.categorical) {
      std::string value = categorical_field(row, cat.column);
      bool known = false;
      for (const auto& level : cat.categories) {
        if (level == cat.base) {
          if (level == value) known = true;
          continue;
        }
        d.X(i, col) = (level == value) ? 1.0 : 0.0;
        if (level == value) known = true;
        ++col;
      }
      if (!known)
        throw DataError("build_design: unknown category '" + value +
                        "' in column " + cat.column + " at row " + row.trip_id);
    }
  }
  if (!d.X.allFinite() || !d.y.allFinite())
    throw DataError("build_design: non-finite entry in design");
  return d;
}

// ---------------------------------------------------------------------------
// Aliasing
// ---------------------------------------------------------------------------

namespace {

struct Aliasing {
  std::vector<Eigen::Index> kept;    // ascending
  std::vector<Eigen::Index> dropped; // ascending
};

Aliasing detect_aliasing(const Eigen::MatrixXd& X) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kAliasTolerance);
  Eigen::Index rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  Aliasing a;
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    if (i < rank) a.kept.push_back(perm(i));
    else a.dropped.push_back(perm(i));
  }
  std::sort(a.kept.begin(), a.kept.end());
  std::sort(a.dropped.begin(), a.dropped.end());
  return a;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X,
                               const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  return out;
}

std::vector<std::string> aliased_names(const DesignMatrix& design,
                                       const Aliasing& a) {
  std::vector<std::string> names;
  for (Eigen::Index j : a.dropped)
    names.push_back(design.column_names.empty()
                        ? "column " + std::to_string(j)
                        : design.column_names[static_cast<std::size_t>(j)]);
  return names;
}

} // namespace

// ---------------------------------------------------------------------------
// fit_ols
// ---------------------------------------------------------------------------

FitResult fit_ols(const DesignMatrix& design) {
  if (!design.X.allFinite() || !design.y.allFinite())
    throw DataError("fit_ols: non-finite entries");
  Aliasing alias = detect_aliasing(design.X);
  auto p_eff = static_cast<Eigen::Index>(alias.kept.size());
  Eigen::Index n = design.n();
  if (n <= p_eff)
    throw DataError("fit_ols: under-determined, n=" + std::to_string(n) +
                    " <= p=" + std::to_string(p_eff));

  Eigen::MatrixXd Xk = select_columns(design.X, alias.kept);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Xk);
  Eigen::VectorXd beta_k = qr.solve(design.y);
  Eigen::VectorXd resid = design.y - Xk * beta_k;
  double sse = resid.squaredNorm();

  double sigma2 = sse / static_cast<double>(n - p_eff);
  // (X'X)^-1 from the R factor
  Eigen::MatrixXd R = qr.matrixQR().topRows(p_eff).triangularView<Eigen::Upper>();
  Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(p_eff, p_eff));
  Eigen::MatrixXd xtx_inv = Rinv * Rinv.transpose();
  Eigen::VectorXd se_k = (sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();

  double ymean = design.y.mean();
  double tss = (design.y.array() - ymean).square().sum();
  double r2 = tss > 0 ? 1.0 - sse / tss : 0.0;

  FitResult fit;
  fit.kind = FitKind::OLS;
  fit.column_names = design.column_names;
  fit.coefficients = Eigen::VectorXd::Constant(design.p(), kNaN);
  fit.std_errors = Eigen::VectorXd::Constant(design.p(), kNaN);
  fit.t_values = Eigen::VectorXd::Constant(design.p(), kNaN);
  for (std::size_t j = 0; j < alias.kept.size(); ++j) {
    Eigen::Index col = alias.kept[j];
    fit.coefficients(col) = beta_k(static_cast<Eigen::Index>(j));
    fit.std_errors(col) = se_k(static_cast<Eigen::Index>(j));
    if (se_k(static_cast<Eigen::Index>(j)) > 0)
      fit.t_values(col) = beta_k(static_cast<Eigen::Index>(j)) / se_k(static_cast<Eigen::Index>(j));
  }
  fit.objective = sse;
  fit.fit_measure = r2;
  fit.aliased = aliased_names(design, alias);
  return fit;
}

// ---------------------------------------------------------------------------
// check loss and quantiles
// ---------------------------------------------------------------------------

double check_loss(double q, std::span<const double> residuals) {
  if (q <= 0 || q >= 1) throw DataError("check_loss: q must be inside (0,1)");
  double total = 0;
  for (double e : residuals) total += e >= 0 ? q * e : (q - 1) * e;
  return total;
}

double check_loss(double q, const Eigen::VectorXd& residuals) {
  return check_loss(q, std::span<const double>(residuals.data(),
                                               static_cast<std::size_t>(residuals.size())));
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw DataError("empirical_quantile: empty input");
  if (q <= 0 || q >= 1) throw DataError("empirical_quantile: q outside (0,1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(n * q)) - 1;
  if (idx >= sorted.size()) idx = sorted.size() - 1;
  return sorted[idx];
}

double pseudo_r2(double min_deviation, double raw_deviation) {
  if (min_deviation < 0 || raw_deviation < 0)
    throw DataError("pseudo_r2: deviations must be non-negative");
  if (raw_deviation == 0)
    throw DataError("pseudo_r2: raw deviation is zero (all responses identical)");
  return 1.0 - min_deviation / raw_deviation;
}

// ---------------------------------------------------------------------------
// Interior-point quantile solver
//
// Solves the LP dual  max y'a  s.t.  X'a = (1-q) X'1,  a in [0,1]^n
// with a Mehrotra predictor-corrector primal-dual method. The equality
// multiplier at the optimum is the coefficient vector.
// ---------------------------------------------------------------------------

namespace {

struct IpmOutcome {
  Eigen::VectorXd beta;
  int iterations = 0;
  double gap = 0;
  bool converged = false;
};

IpmOutcome solve_quantile_ipm(const Eigen::MatrixXd& X, const Eigen::VectorXd& yv,
                              double q, const QuantileSolverOptions& opts) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const double beta_step = 0.9995;

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 - q); // dual variable a
  Eigen::VectorXd s = Eigen::VectorXd::Constant(n, q);       // slack u - a

  // multiplier start: least-squares fit keeps dual feasibility exact
  Eigen::VectorXd y = X.householderQr().solve(yv);
  Eigen::VectorXd r = yv - X * y;
  double e0 = 1e-5 * std::max(1.0, r.cwiseAbs().maxCoeff());
  Eigen::VectorXd w = r.cwiseMax(0.0).array() + e0; // multiplier for a <= 1
  Eigen::VectorXd z = (-r).cwiseMax(0.0).array() + e0;

  double gap = x.dot(z) + s.dot(w);
  IpmOutcome out;

  auto step_length = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (dv(i) < 0) a = std::min(a, -v(i) / dv(i));
    return std::min(1.0, beta_step * a);
  };

  Eigen::VectorXd dx(n), ds(n), dz(n), dw(n), dy(p);
  while (out.iterations < opts.max_iterations) {
    double objective = check_loss(q, yv - X * y);
    if (gap < opts.gap_tolerance * (1.0 + std::abs(objective))) {
      out.converged = true;
      break;
    }
    ++out.iterations;

    Eigen::VectorXd d = (z.array() / x.array() + w.array() / s.array()).inverse();
    Eigen::MatrixXd ada = X.transpose() * d.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> solver(ada);

    // affine (predictor) direction
    Eigen::VectorXd rhs_aff = w - z;
    dy = solver.solve(X.transpose() * (d.array() * rhs_aff.array()).matrix());
    dx = d.array() * ((rhs_aff - X * dy).array());
    ds = -dx;
    dz = (-z.array() - (z.array() / x.array()) * dx.array()).matrix();
    dw = (-w.array() + (w.array() / s.array()) * dx.array()).matrix();

    double ap = std::min(step_length(x, dx), step_length(s, ds));
    double ad = std::min(step_length(z, dz), step_length(w, dw));

    if (std::min(ap, ad) < 1.0) {
      // Mehrotra corrector
      double g = (x + ap * dx).dot(z + ad * dz) + (s + ap * ds).dot(w + ad * dw);
      double mu = gap / (2.0 * static_cast<double>(n));
      double ratio = g / gap;
      mu *= ratio * ratio * ratio;

      Eigen::ArrayXd dxdz = dx.array() * dz.array();
      Eigen::ArrayXd dsdw = ds.array() * dw.array();
      Eigen::ArrayXd xinv = x.array().inverse();
      Eigen::ArrayXd sinv = s.array().inverse();

      Eigen::VectorXd rhs = (rhs_aff.array() + mu * (xinv - sinv) + dsdw * sinv -
                             dxdz * xinv)
                                .matrix();
      dy = solver.solve(X.transpose() * (d.array() * rhs.array()).matrix());
      dx = d.array() * ((rhs - X * dy).array());
      ds = -dx;
      dz = (mu * xinv - z.array() - (z.array() * xinv) * dx.array() - dxdz * xinv)
               .matrix();
      dw = (mu * sinv - w.array() + (w.array() * sinv) * dx.array() - dsdw * sinv)
               .matrix();

      ap = std::min(step_length(x, dx), step_length(s, ds));
      ad = std::min(step_length(z, dz), step_length(w, dw));
    }

    x += ap * dx;
    s += ap * ds;
    y += ad * dy;
    z += ad * dz;
    w += ad * dw;
    gap = x.dot(z) + s.dot(w);
  }
  out.gap = gap;
  out.beta = y;
  if (!out.converged) {
    // a final check: the gap may already be below tolerance at the cap
    double objective = check_loss(q, yv - X * y);
    out.converged = gap < opts.gap_tolerance * (1.0 + std::abs(objective));
  }
  return out;
}

} // namespace

FitResult fit_quantile(const DesignMatrix& design, double q,
                       const QuantileSolverOptions& opts) {
  if (q <= 0 || q >= 1) throw DataError("fit_quantile: q must be inside (0,1)");
  if (!design.X.allFinite() || !design.y.allFinite())
    throw DataError("fit_quantile: non-finite entries");

  Aliasing alias = detect_aliasing(design.X);
  auto p_eff = static_cast<Eigen::Index>(alias.kept.size());
  if (design.n() <= p_eff)
    throw DataError("fit_quantile: under-determined, n=" + std::to_string(design.n()) +
                    " <= p=" + std::to_string(p_eff));

  Eigen::MatrixXd Xk = select_columns(design.X, alias.kept);
  IpmOutcome ipm = solve_quantile_ipm(Xk, design.y, q, opts);
  if (!ipm.converged) {
    std::ostringstream os;
    os << "fit_quantile: interior-point solver did not converge in "
       << opts.max_iterations << " iterations (final gap " << ipm.gap << ")";
    throw ConvergenceError(os.str());
  }

  FitResult fit;
  fit.kind = FitKind::Quantile;
  fit.q = q;
  fit.column_names = design.column_names;
  fit.coefficients = Eigen::VectorXd::Constant(design.p(), kNaN);
  fit.std_errors = Eigen::VectorXd::Constant(design.p(), kNaN);
  fit.t_values = Eigen::VectorXd::Constant(design.p(), kNaN);
  for (std::size_t j = 0; j < alias.kept.size(); ++j)
    fit.coefficients(alias.kept[j]) = ipm.beta(static_cast<Eigen::Index>(j));

  Eigen::VectorXd resid = design.y - Xk * ipm.beta;
  fit.objective = check_loss(q, resid);
  double q_of_y = empirical_quantile(
      std::span<const double>(design.y.data(), static_cast<std::size_t>(design.y.size())), q);
  fit.raw_deviation = check_loss(q, design.y.array() - q_of_y);
  fit.fit_measure =
      fit.raw_deviation > 0
          ? std::clamp(pseudo_r2(fit.objective, fit.raw_deviation), 0.0, 1.0)
          : 0.0;
  fit.aliased = aliased_names(design, alias);
  fit.iterations = ipm.iterations;
  return fit;
}

// ---------------------------------------------------------------------------
// bootstrap_se
// ---------------------------------------------------------------------------

Eigen::VectorXd bootstrap_se(const DesignMatrix& design, double q, int B,
                             std::uint64_t seed, const QuantileSolverOptions& opts) {
  if (B < 1) throw DataError("bootstrap_se: B must be >= 1");
  if (q <= 0 || q >= 1) throw DataError("bootstrap_se: q must be inside (0,1)");

  Aliasing alias = detect_aliasing(design.X);
  auto p_eff = static_cast<Eigen::Index>(alias.kept.size());
  Eigen::Index n = design.n();
  if (n <= p_eff) throw DataError("bootstrap_se: under-determined design");
  Eigen::MatrixXd Xk = select_columns(design.X, alias.kept);

  constexpr int kMaxAttemptsPerResample = 32;
  Eigen::MatrixXd coefs(B, p_eff);
  std::vector<int> attempts(static_cast<std::size_t>(B), 0);
  std::atomic<bool> failed{false};
  std::string failure;

#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < B; ++b) {
    if (failed.load()) continue;
    // per-(resample, attempt) streams keep results schedule-independent
    for (int attempt = 0; attempt < kMaxAttemptsPerResample; ++attempt) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b) * kMaxAttemptsPerResample + attempt);
      Eigen::MatrixXd Xb(n, p_eff);
      Eigen::VectorXd yb(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        auto pick = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n)));
        Xb.row(i) = Xk.row(pick);
        yb(i) = design.y(pick);
      }
      Aliasing sub = detect_aliasing(Xb);
      if (static_cast<Eigen::Index>(sub.kept.size()) < p_eff) {
        ++attempts[static_cast<std::size_t>(b)];
        continue; // rank-deficient resample: redraw
      }
      IpmOutcome ipm = solve_quantile_ipm(Xb, yb, q, opts);
      if (!ipm.converged) {
        ++attempts[static_cast<std::size_t>(b)];
        continue;
      }
      coefs.row(b) = ipm.beta.transpose();
      goto done;
    }
    {
      bool expected = false;
      if (failed.compare_exchange_strong(expected, true))
        failure = "bootstrap_se: a resample could not be completed after " +
                  std::to_string(kMaxAttemptsPerResample) + " redraws";
    }
  done:;
  }
  if (failed.load()) throw DataError(failure);

  long long total_redraws = 0;
  for (int a : attempts) total_redraws += a;
  if (total_redraws > 10LL * B)
    throw DataError("bootstrap_se: excessive redraws (" +
                    std::to_string(total_redraws) + " > 10*B)");

  Eigen::VectorXd se = Eigen::VectorXd::Constant(design.p(), kNaN);
  for (std::size_t j = 0; j < alias.kept.size(); ++j) {
    auto col = coefs.col(static_cast<Eigen::Index>(j));
    double mean = col.mean();
    double sd = 0;
    if (B > 1)
      sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(B - 1));
    se(alias.kept[j]) = sd;
  }
  return se;
}

void attach_bootstrap(FitResult& fit, const Eigen::VectorXd& se) {
  fit.std_errors = se;
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j) {
    if (std::isfinite(fit.coefficients(j)) && std::isfinite(se(j)) && se(j) > 0)
      fit.t_values(j) = fit.coefficients(j) / se(j);
    else
      fit.t_values(j) = kNaN;
  }
}

// ---------------------------------------------------------------------------
// quantile_profile
// ---------------------------------------------------------------------------

QuantileProfile quantile_profile(const DesignMatrix& design,
                                 const std::vector<double>& quantiles, int B,
                                 std::uint64_t seed,
                                 const QuantileSolverOptions& opts) {
  if (quantiles.empty()) throw DataError("quantile_profile: empty grid");
  QuantileProfile profile;
  profile.quantiles = quantiles;
  profile.column_names = design.column_names;
  profile.ols_fit = fit_ols(design);

  for (std::size_t qi = 0; qi < quantiles.size(); ++qi) {
    double q = quantiles[qi];
    FitResult fit;
    try {
      fit = fit_quantile(design, q, opts);
      attach_bootstrap(fit, bootstrap_se(design, q, B, seed + qi, opts));
    } catch (const Error& e) {
      throw ConvergenceError("quantile_profile at q=" + std::to_string(q) + ": " + e.what());
    }
    profile.fits.push_back(std::move(fit));
  }

  for (std::size_t j = 0; j < design.column_names.size(); ++j) {
    for (std::size_t qi = 0; qi < quantiles.size(); ++qi) {
      const FitResult& fit = profile.fits[qi];
      ProfileEntry e;
      e.column = design.column_names[j];
      e.q = quantiles[qi];
      e.coefficient = fit.coefficients(static_cast<Eigen::Index>(j));
      double se = fit.std_errors(static_cast<Eigen::Index>(j));
      e.lower = e.coefficient - 1.96 * se;
      e.upper = e.coefficient + 1.96 * se;
      e.ols_reference = profile.ols_fit.coefficients(static_cast<Eigen::Index>(j));
      profile.entries.push_back(e);
    }
  }
  return profile;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string FitResult::to_json() const {
  nlohmann::json j;
  j["kind"] = kind == FitKind::OLS ? "ols" : "quantile";
  if (kind == FitKind::Quantile) j["q"] = q;
  nlohmann::json cols = nlohmann::json::array();
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    nlohmann::json c;
    c["name"] = column_names[i];
    auto idx = static_cast<Eigen::Index>(i);
    auto put = [&](const char* key, double v) {
      if (std::isfinite(v)) c[key] = v;
      else c[key] = nullptr;
    };
    put("coefficient", coefficients(idx));
    put("std_error", std_errors(idx));
    put("t_value", t_values(idx));
    cols.push_back(c);
  }
  j["columns"] = cols;
  j["objective"] = objective;
  if (kind == FitKind::Quantile) j["raw_deviation"] = raw_deviation;
  j["fit_measure"] = fit_measure;
  j["aliased"] = aliased;
  j["iterations"] = iterations;
  return j.dump(2);
}

} // namespace voltrip
