#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xylab/gm_opt.hpp"
#include "xylab/model_core.hpp"
#include "xylab/thermal.hpp"

namespace xylab {

// Inclusive grid lo..hi with `steps` points, written lo:hi:steps.
struct Range {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  static Range parse(const std::string& text);
  std::vector<double> values() const;
  void validate() const;
};

struct SweepConfig {
  Range h_range{0.0, 2.0, 21};
  Range eta_range{-1.0, 1.0, 21};
  int n = 12;
  // Optional temperatures at which p0 and mu are tabulated for every grid point.
  std::vector<double> t_grid;
  GMOptions gm;
  std::optional<double> tol_deg;
  std::string out;
  bool emit_svg = false;
  int workers = 1;
};

struct SweepRecord {
  double h = 0.0;
  double eta = 0.0;
  int n = 0;
  int d0 = 1;
  double e0 = 0.0;
  double delta = 0.0;
  double g_bits = 0.0;
  double p0_at_tth = 1.0;
  double t_th = 0.0;
  bool converged = false;
  bool vacuous = false;
  int restarts_used = 0;
};

// Geometric measure of the ground support followed by the threshold temperature.
SweepRecord evaluate_point(const ModelParams& params, const GMOptions& gm, std::optional<double> tol_deg = std::nullopt);

// One record per grid point, h outer and eta inner. Points are evaluated in
// parallel but assembled in grid order, so output does not depend on workers.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

// printf "%.17g".
std::string format_real(double x);

extern const char* const kSweepHeader;
void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records);
std::string sweep_csv(std::span<const SweepRecord> records);

// Population diagnostics: h,eta,n,T,p0,mu per grid point and temperature.
void write_population_csv(std::ostream& os, const SweepConfig& config);

// Phase-diagram label: "V-line" (h = 1), "H-line" (eta = 0, h < 1),
// "C-line" (h^2 + eta^2 = 1), otherwise "phase1", "phase2" or "phase3".
std::string region_label(double h, double eta);

// Central second differences; NaN at both ends.
std::vector<double> second_differences(std::span<const double> values);

enum class ScanAxis { h, eta };

struct ScanConfig {
  ScanAxis axis = ScanAxis::h;
  double fixed = 0.0;  // eta for an h scan, h for an eta scan
  Range range{0.0, 1.5, 31};
  int n = 12;
  GMOptions gm;
  std::optional<double> tol_deg;
  int workers = 1;
};

struct ScanRow {
  SweepRecord record;
  std::string region;
  double d2_g_bits = 0.0;
  double d2_t_th = 0.0;
};

std::vector<ScanRow> run_scan(const ScanConfig& config);
void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows);

// Simple static plots.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
void write_line_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, std::span<const Series> series);
void write_heatmap_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> values);

}  // namespace xylab
