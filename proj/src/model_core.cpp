#include "xylab/model_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "xylab/errors.hpp"

namespace xylab {

namespace {

constexpr double kPi = std::numbers::pi;
// |h + cos theta| and |eta sin theta| below this are treated as the singular point.
constexpr double kSingularTol = 1e-12;

void check_field(double h, double eta) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    std::ostringstream os;
    os << "transverse field must be finite and >= 0, got h=" << h;
    throw ParameterError(os.str());
  }
  if (!(std::abs(eta) <= 1.0)) {
    std::ostringstream os;
    os << "anisotropy must lie in [-1, 1], got eta=" << eta;
    throw ParameterError(os.str());
  }
}

// sin and cos of grid angles that are multiples of pi/2 come out as ~1e-16
// instead of 0.
double snap(double x) { return std::abs(x) < 1e-15 ? 0.0 : x; }

}  // namespace

void ModelParams::validate() const {
  check_field(h, eta);
  if (n < 4 || n % 2 != 0) {
    std::ostringstream os;
    os << "number of sites must be even and >= 4, got n=" << n;
    throw ParameterError(os.str());
  }
}

ModelParams ModelParams::make(double h, double eta, int n) {
  ModelParams p{h, eta, n};
  p.validate();
  return p;
}

const char* to_string(Parity p) { return p == Parity::plus ? "plus" : "minus"; }

std::vector<double> momentum_grid(const ModelParams& params, Parity sector) {
  params.validate();
  const int n = params.n;
  std::vector<double> grid(n);
  for (int k = 1; k <= n; ++k) {
    const double m = sector == Parity::plus ? 2.0 * k - 1.0 : 2.0 * k;
    grid[k - 1] = m * kPi / n;
  }
  return grid;
}

double bogoliubov_angle(double theta, double h, double eta) {
  check_field(h, eta);
  const double a = h + snap(std::cos(theta));
  const double b = std::abs(eta * snap(std::sin(theta)));
  if (std::abs(a) < kSingularTol && b < kSingularTol) {
    if (eta != 0.0) {
      // Only theta = pi, h = 1 reaches here: |b| ~ |eta| s dominates a ~ s^2/2.
      return kPi / 4.0;
    }
    // eta = 0: sign of h + cos(theta - s) for small s > 0.
    const double s = snap(std::sin(theta));
    const bool positive = std::abs(s) > 1e-8 ? s > 0.0 : true;
    return positive ? kPi / 2.0 : 0.0;
  }
  return 0.5 * std::atan2(b, -a);
}

double quasiparticle_energy(double theta, double h, double eta) {
  const double a = h + snap(std::cos(theta));
  const double b = eta * snap(std::sin(theta));
  return 2.0 * std::hypot(a, b);
}

SectorSpectrum sector_spectrum(const ModelParams& params, Parity sector) {
  SectorSpectrum s;
  s.sector = sector;
  s.thetas = momentum_grid(params, sector);
  s.phis.reserve(s.thetas.size());
  s.epsilons.reserve(s.thetas.size());
  double half_sum = 0.0;
  for (double theta : s.thetas) {
    s.phis.push_back(bogoliubov_angle(theta, params.h, params.eta));
    const double e = quasiparticle_energy(theta, params.h, params.eta);
    s.epsilons.push_back(e);
    half_sum += 0.5 * e;
  }
  s.reference_energy = -half_sum;

  // Plus sector: every momentum is paired and the BCS vacuum has even fermion
  // number. Minus sector: theta = 2pi is always occupied in the vacuum
  // (h + 1 > 0), theta = pi only when h > 1, so the vacuum has odd fermion
  // number, as required, exactly when h <= 1.
  s.required_parity = (sector == Parity::minus && params.h > 1.0) ? 1 : 0;
  s.ground_energy = s.reference_energy;
  if (s.required_parity == 1) {
    s.ground_energy += *std::min_element(s.epsilons.begin(), s.epsilons.end());
  }
  return s;
}

double default_degeneracy_tol(double e0) { return 1e-8 * std::max(1.0, std::abs(e0)); }

namespace {

struct LowLevels {
  double l0;
  double l1;
};

LowLevels lowest_two(const SectorSpectrum& s) {
  std::vector<double> e = s.epsilons;
  std::partial_sort(e.begin(), e.begin() + 2, e.end());
  if (s.required_parity == 0) return {s.reference_energy, s.reference_energy + e[0] + e[1]};
  return {s.reference_energy + e[0], s.reference_energy + e[1]};
}

}  // namespace

GapInfo gap_info(const ModelParams& params, std::optional<double> tol_deg) {
  const SectorSpectrum plus = sector_spectrum(params, Parity::plus);
  const SectorSpectrum minus = sector_spectrum(params, Parity::minus);
  const LowLevels lp = lowest_two(plus);
  const LowLevels lm = lowest_two(minus);

  GapInfo g;
  g.e0_plus = lp.l0;
  g.e0_minus = lm.l0;
  g.e0 = std::min(lp.l0, lm.l0);
  g.ground_sector = lm.l0 < lp.l0 ? Parity::minus : Parity::plus;
  g.tol_deg = (tol_deg && *tol_deg > 0.0) ? *tol_deg : default_degeneracy_tol(g.e0);
  g.d0 = std::abs(lp.l0 - lm.l0) < g.tol_deg ? 2 : 1;

  double e1;
  if (g.d0 == 2) {
    e1 = std::min(lp.l1, lm.l1);
  } else if (g.ground_sector == Parity::plus) {
    e1 = std::min(lp.l1, lm.l0);
  } else {
    e1 = std::min(lm.l1, lp.l0);
  }
  g.delta = std::max(0.0, e1 - g.e0);
  return g;
}

double gap_bound_delta(double h, double eta) {
  check_field(h, eta);
  const double e2 = eta * eta;
  if (h >= 1.0 - e2) return std::abs(h - 1.0);
  // h < 1 - eta^2 implies eta^2 < 1, so the denominator is positive.
  return std::abs(eta) * std::sqrt(std::max(0.0, 1.0 - e2 - h * h)) / std::sqrt(1.0 - e2);
}

ModelParams eta_sign_map(const ModelParams& params) {
  ModelParams out = params;
  out.eta = -params.eta;
  return out;
}

double vline_overlap(double eta, double dh, int n, Parity sector) {
  if (!(dh > 0.0 && dh < 1.0)) throw ParameterError("vline_overlap requires 0 < dh < 1");
  const ModelParams below = ModelParams::make(1.0 - dh, eta, n);
  const std::vector<double> grid = momentum_grid(below, sector);
  const int count = sector == Parity::plus ? n / 2 : n / 2 - 1;
  double product = 1.0;
  for (int k = 0; k < count; ++k) {
    const double lo = bogoliubov_angle(grid[k], 1.0 - dh, eta);
    const double hi = bogoliubov_angle(grid[k], 1.0 + dh, eta);
    product *= std::cos(hi - lo);
  }
  return product;
}

std::vector<double> sector_levels(const ModelParams& params, Parity sector) {
  if (params.n > 16) throw CapacityError("sector_levels enumerates 2^n occupations; n <= 16");
  const SectorSpectrum s = sector_spectrum(params, sector);
  const int n = params.n;
  std::vector<double> levels;
  levels.reserve(std::size_t{1} << (n - 1));
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (static_cast<int>(std::popcount(mask) & 1) != s.required_parity) continue;
    double e = s.reference_energy;
    for (int k = 0; k < n; ++k) {
      if (mask & (std::uint32_t{1} << k)) e += s.epsilons[k];
    }
    levels.push_back(e);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

}  // namespace xylab
