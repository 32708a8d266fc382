#include "xylab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "xylab/errors.hpp"
#include "xylab/parallel.hpp"

namespace xylab {

const char* const kSweepHeader = "h,eta,n,d0,e0,delta,g_bits,p0_at_tth,t_th,converged,vacuous_flag,restarts_used";

Range Range::parse(const std::string& text) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.steps) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof()) {
    throw ParameterError("range must be written lo:hi:steps, got '" + text + "'");
  }
  r.validate();
  return r;
}

void Range::validate() const {
  if (steps < 2) throw ParameterError("range needs steps >= 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw ParameterError("range needs finite lo <= hi");
}

std::vector<double> Range::values() const {
  validate();
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
  return v;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SweepRecord evaluate_point(const ModelParams& params, const GMOptions& gm, std::optional<double> tol_deg) {
  params.validate();
  const GMResult g = gm_of_ground_state(params, tol_deg, gm);
  const PopulationModel model(params, PopulationMethod::free_fermion, tol_deg);
  const ThresholdResult t = threshold_temperature(model, g.g_bits);

  SweepRecord r;
  r.h = params.h;
  r.eta = params.eta;
  r.n = params.n;
  r.d0 = model.d0();
  r.e0 = model.e0();
  r.delta = model.delta();
  r.g_bits = g.g_bits;
  r.t_th = t.t_th;
  r.p0_at_tth = t.t_th > 0.0 ? ground_population(model, t.t_th) : 1.0 / model.d0();
  r.converged = g.converged;
  r.vacuous = t.vacuous;
  r.restarts_used = g.restarts_used;
  return r;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const std::vector<double> hs = config.h_range.values();
  const std::vector<double> etas = config.eta_range.values();
  std::vector<ModelParams> points;
  for (double h : hs) {
    for (double eta : etas) points.push_back(ModelParams::make(h, eta, config.n));
  }
  GMOptions gm = config.gm;
  gm.threads = 1;
  std::vector<SweepRecord> records(points.size());
  parallel_for(points.size(), config.workers,
               [&](std::size_t i) { records[i] = evaluate_point(points[i], gm, config.tol_deg); });
  return records;
}

namespace {

void write_record(std::ostream& os, const SweepRecord& r) {
  os << format_real(r.h) << ',' << format_real(r.eta) << ',' << r.n << ',' << r.d0 << ',' << format_real(r.e0)
     << ',' << format_real(r.delta) << ',' << format_real(r.g_bits) << ',' << format_real(r.p0_at_tth) << ','
     << format_real(r.t_th) << ',' << (r.converged ? 1 : 0) << ',' << (r.vacuous ? 1 : 0) << ','
     << r.restarts_used;
}

}  // namespace

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
  os << kSweepHeader << '\n';
  for (const SweepRecord& r : records) {
    write_record(os, r);
    os << '\n';
  }
}

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::ostringstream os;
  write_sweep_csv(os, records);
  return os.str();
}

void write_population_csv(std::ostream& os, const SweepConfig& config) {
  os << "h,eta,n,T,p0,mu\n";
  for (double h : config.h_range.values()) {
    for (double eta : config.eta_range.values()) {
      const PopulationModel model(ModelParams::make(h, eta, config.n), PopulationMethod::free_fermion,
                                  config.tol_deg);
      for (double t : config.t_grid) {
        os << format_real(h) << ',' << format_real(eta) << ',' << config.n << ',' << format_real(t) << ','
           << format_real(ground_population(model, t)) << ',' << format_real(population_exponent(model, t))
           << '\n';
      }
    }
  }
}

std::string region_label(double h, double eta) {
  constexpr double tol = 1e-12;
  if (std::abs(h - 1.0) < tol) return "V-line";
  if (std::abs(eta) < tol && h < 1.0) return "H-line";
  if (std::abs(h * h + eta * eta - 1.0) < tol) return "C-line";
  if (h > 1.0) return "phase3";
  return h < std::sqrt(1.0 - eta * eta) ? "phase1" : "phase2";
}

std::vector<double> second_differences(std::span<const double> v) {
  std::vector<double> d(v.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) d[i] = v[i + 1] - 2.0 * v[i] + v[i - 1];
  return d;
}

std::vector<ScanRow> run_scan(const ScanConfig& config) {
  const std::vector<double> values = config.range.values();
  std::vector<ModelParams> points;
  for (double v : values) {
    points.push_back(config.axis == ScanAxis::h ? ModelParams::make(v, config.fixed, config.n)
                                                : ModelParams::make(config.fixed, v, config.n));
  }
  GMOptions gm = config.gm;
  gm.threads = 1;
  std::vector<ScanRow> rows(points.size());
  parallel_for(points.size(), config.workers, [&](std::size_t i) {
    rows[i].record = evaluate_point(points[i], gm, config.tol_deg);
    rows[i].region = region_label(points[i].h, points[i].eta);
  });
  std::vector<double> g, t;
  for (const ScanRow& r : rows) {
    g.push_back(r.record.g_bits);
    t.push_back(r.record.t_th);
  }
  const std::vector<double> dg = second_differences(g);
  const std::vector<double> dt = second_differences(t);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].d2_g_bits = dg[i];
    rows[i].d2_t_th = dt[i];
  }
  return rows;
}

void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows) {
  os << kSweepHeader << ",region,d2_g_bits,d2_t_th\n";
  for (const ScanRow& r : rows) {
    write_record(os, r.record);
    os << ',' << r.region << ',' << format_real(r.d2_g_bits) << ',' << format_real(r.d2_t_th) << '\n';
  }
}

}  // namespace xylab
