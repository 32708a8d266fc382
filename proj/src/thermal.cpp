#include "xylab/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "xylab/ed_engine.hpp"
#include "xylab/errors.hpp"

namespace xylab {

namespace {

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("temperature must be finite and > 0");
}

// log of sum over quasiparticle subsets with |subset| % 2 == parity of prod_k x_k.
double log_parity_sum(const std::vector<double>& eps, double t, int parity) {
  double even = 1.0;
  double odd = 0.0;
  double log_scale = 0.0;
  for (double e : eps) {
    const double x = std::exp(-e / t);
    const double ne = even + odd * x;
    const double no = odd + even * x;
    const double s = std::max(ne, no);
    even = ne / s;
    odd = no / s;
    log_scale += std::log(s);
  }
  return log_scale + std::log(parity == 0 ? even : odd);
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

const char* to_string(PopulationMethod m) { return m == PopulationMethod::dense_ed ? "dense-ed" : "free-fermion"; }

PopulationModel::PopulationModel(const ModelParams& params, PopulationMethod method, std::optional<double> tol_deg)
    : params_(params), method_(method), gap_(gap_info(params, tol_deg)) {
  if (method_ == PopulationMethod::dense_ed) {
    levels_ = full_spectrum(params_).eigenvalues;
    gap_.e0 = levels_.front();
  } else {
    plus_ = sector_spectrum(params_, Parity::plus);
    minus_ = sector_spectrum(params_, Parity::minus);
  }
}

double PopulationModel::log_partition_function(double t) const {
  check_temperature(t);
  if (method_ == PopulationMethod::dense_ed) {
    const double emin = levels_.front();
    double acc = 0.0;
    for (double e : levels_) acc += std::exp(-(e - emin) / t);
    return -emin / t + std::log(acc);
  }
  const double lp = -plus_->reference_energy / t + log_parity_sum(plus_->epsilons, t, plus_->required_parity);
  const double lm = -minus_->reference_energy / t + log_parity_sum(minus_->epsilons, t, minus_->required_parity);
  return log_add(lp, lm);
}

double PopulationModel::log_ground_population(double t) const {
  return -gap_.e0 / t - log_partition_function(t);
}

double partition_function(const PopulationModel& model, double t) {
  return std::exp(model.log_partition_function(t));
}

double ground_population(const PopulationModel& model, double t) {
  return std::exp(model.log_ground_population(t));
}

double population_exponent(const PopulationModel& model, double t) {
  return -model.log_ground_population(t) / std::numbers::ln2 / model.params().n;
}

ExponentBounds population_exponent_bounds(double h, double eta, double t) {
  check_temperature(t);
  const double d = gap_bound_delta(h, eta);
  return {std::log1p(std::exp(-(h + 1.0) / t)) / std::numbers::ln2,
          std::log1p(std::exp(-d / t)) / std::numbers::ln2};
}

BisectionResult bisect_decreasing(const std::function<double(double)>& f, double target, double lo, double hi,
                                  double t_max, int max_iter) {
  if (!(f(lo) > target)) throw RangeError("bisection: lower end does not exceed the target");
  while (f(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > t_max) {
      std::ostringstream os;
      os << "no root below T_max=" << t_max;
      throw RangeError(os.str());
    }
  }
  int it = 0;
  for (; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, it};
}

namespace {

ThresholdResult solve_threshold(const std::function<double(double)>& lhs, const PopulationModel& model,
                                double g_bits, const ThresholdOptions& opts, ThresholdResult r) {
  if (!(g_bits >= 0.0)) throw ParameterError("geometric measure must be >= 0");
  r.g_bits = g_bits;
  r.d0 = model.d0();
  r.target = std::exp2(-g_bits);
  if (g_bits <= opts.separable_tol) {
    r.separable = true;
    r.residual = 0.0;
    return r;
  }
  // A d0-fold ground space shares the weight, p0(0+) = 1/d0, however small
  // the residual splitting of the computed levels.
  const double low_value = std::min(lhs(opts.t_lo), 1.0 / r.d0);
  if (r.target >= low_value * (1.0 - opts.vacuous_rel_tol)) {
    r.vacuous = true;
    r.residual = 0.0;
    return r;
  }
  const BisectionResult b = bisect_decreasing(lhs, r.target, opts.t_lo, opts.t_hi_start, opts.t_max, opts.max_iter);
  r.t_th = b.root;
  r.lo = b.lo;
  r.hi = b.hi;
  r.iterations = b.iterations;
  r.residual = std::abs(lhs(b.root) - r.target);
  return r;
}

}  // namespace

ThresholdResult threshold_temperature(const PopulationModel& model, double g_bits, const ThresholdOptions& opts) {
  ThresholdResult r;
  r.kind = ThresholdKind::plain;
  return solve_threshold([&](double t) { return ground_population(model, t); }, model, g_bits, opts, r);
}

ThresholdResult gapped_threshold(const PopulationModel& model, double g_bits, double delta,
                                 const ThresholdOptions& opts) {
  if (!(delta > 0.0)) throw ParameterError("gapped threshold requires delta > 0");
  ThresholdResult r;
  r.kind = ThresholdKind::gapped;
  r.delta = delta;
  return solve_threshold(
      [&](double t) { return -std::expm1(-delta / t) * ground_population(model, t); }, model, g_bits, opts, r);
}

void WStateModel::validate() const {
  if (m < 2 || m > 60) throw ParameterError("W-state model needs 2 <= m <= 60");
  if (!(delta > 0.0)) throw ParameterError("W-state level spacing must be > 0");
  if (!(kappa > 0.0)) throw ParameterError("W-state gap ratio must be > 0");
}

double WStateModel::d_total() const { return std::ldexp(1.0, m); }

double wstate_population(const WStateModel& w, double t) {
  w.validate();
  check_temperature(t);
  return std::expm1(-w.delta / t) / std::expm1(-w.d_total() * w.delta / t);
}

double wstate_gm(int m) {
  if (m < 2) throw ParameterError("W state needs m >= 2");
  return (m - 1) * std::log2(static_cast<double>(m) / (m - 1));
}

double wstate_gapped_threshold(const WStateModel& w) {
  w.validate();
  const double target = std::exp2(-wstate_gm(w.m));
  auto lhs = [&](double t) { return -std::expm1(-w.kappa * w.delta / t) * wstate_population(w, t); };
  const double lo = 1e-6 * w.delta * std::min(1.0, w.kappa);
  return bisect_decreasing(lhs, target, lo, w.delta, 1e6 * w.delta, 400).root;
}

double wstate_gapped_threshold_tdl(double kappa, double delta) {
  if (!(kappa > 0.0) || !(delta > 0.0)) throw ParameterError("kappa and delta must be > 0");
  auto lhs = [&](double t) { return std::expm1(-kappa * delta / t) * std::expm1(-delta / t); };
  const double lo = 1e-6 * delta * std::min(1.0, kappa);
  return bisect_decreasing(lhs, std::exp(-1.0), lo, delta, 1e9 * delta, 400).root;
}

}  // namespace xylab
