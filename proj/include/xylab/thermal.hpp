#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "xylab/model_core.hpp"

namespace xylab {

enum class PopulationMethod { dense_ed, free_fermion };

const char* to_string(PopulationMethod m);

// Thermal populations of the chain, k_B = 1. Immutable after construction.
//
// The free-fermion route sums each parity sector exactly: with x_k = e^{-eps_k/T}
// the sector partition function is e^{-E_ref/T} times the sum over quasiparticle
// subsets of the required size parity of prod x_k.
class PopulationModel {
 public:
  explicit PopulationModel(const ModelParams& params, PopulationMethod method = PopulationMethod::free_fermion,
                           std::optional<double> tol_deg = std::nullopt);

  const ModelParams& params() const { return params_; }
  PopulationMethod method() const { return method_; }
  double e0() const { return gap_.e0; }
  int d0() const { return gap_.d0; }
  double delta() const { return gap_.delta; }
  const GapInfo& gap() const { return gap_; }

  double log_partition_function(double temperature) const;
  double log_ground_population(double temperature) const;

 private:
  ModelParams params_;
  PopulationMethod method_;
  GapInfo gap_;
  std::vector<double> levels_;  // dense_ed only
  std::optional<SectorSpectrum> plus_;
  std::optional<SectorSpectrum> minus_;
};

// Z(T); +inf if it overflows a double (use the log form for large n).
double partition_function(const PopulationModel& model, double temperature);

// p0(T) = exp(-E0/T) / Z(T), the weight of a single ground state.
double ground_population(const PopulationModel& model, double temperature);

// mu = -log2(p0) / n.
double population_exponent(const PopulationModel& model, double temperature);

struct ExponentBounds {
  double lower;  // log2(1 + exp(-(h+1)/T))
  double upper;  // log2(1 + exp(-delta(h,eta)/T))
};
ExponentBounds population_exponent_bounds(double h, double eta, double temperature);

enum class ThresholdKind { plain, gapped };

struct ThresholdOptions {
  double t_lo = 1e-6;
  double t_hi_start = 1.0;
  double t_max = 1e6;
  int max_iter = 400;
  // Geometric measures at or below this are treated as separable.
  double separable_tol = 1e-12;
  // Relative margin for declaring 2^{-G} >= p0(0+) a vacuous witness.
  double vacuous_rel_tol = 1e-9;
};

struct ThresholdResult {
  double t_th = 0.0;
  double g_bits = 0.0;
  int d0 = 1;
  double target = 1.0;    // 2^{-G}
  double residual = 0.0;  // |lhs(t_th) - target|
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  ThresholdKind kind = ThresholdKind::plain;
  double delta = 0.0;  // gapped only
  bool vacuous = false;
  bool separable = false;
};

// Root of p0(T) = 2^{-G}.
ThresholdResult threshold_temperature(const PopulationModel& model, double g_bits, const ThresholdOptions& opts = {});

// Root of (1 - e^{-Delta/T}) p0(T) = 2^{-G}.
ThresholdResult gapped_threshold(const PopulationModel& model, double g_bits, double delta,
                                 const ThresholdOptions& opts = {});

struct WStateModel {
  int m = 3;
  double delta = 1.0;
  double kappa = 1.0;

  void validate() const;
  double d_total() const;
};

// p0 = (1 - e^{-delta/T}) / (1 - e^{-D delta/T}), D = 2^m.
double wstate_population(const WStateModel& w, double temperature);

// (m-1) log2(m/(m-1)).
double wstate_gm(int m);

// Finite-m gapped threshold: (1 - e^{-kappa delta/T}) p0(T) = 2^{-G(W_m)}.
double wstate_gapped_threshold(const WStateModel& w);

// m -> infinity: (1 - e^{-kappa delta/T})(1 - e^{-delta/T}) = 1/e.
double wstate_gapped_threshold_tdl(double kappa, double delta);

// Bisection for a strictly decreasing f on [lo, hi] with f(lo) > target > f(hi).
// The upper end is doubled from `hi` until f(hi) <= target or hi > t_max
// (RangeError).
struct BisectionResult {
  double root;
  double lo;
  double hi;
  int iterations;
};
BisectionResult bisect_decreasing(const std::function<double(double)>& f, double target, double lo, double hi,
                                  double t_max, int max_iter);

}  // namespace xylab
