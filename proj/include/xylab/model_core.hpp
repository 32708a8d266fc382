#pragma once

#include <optional>
#include <vector>

namespace xylab {

// Coordinates of the periodic spin-1/2 XY chain in a transverse field,
//   H = -sum_j [ (1+eta)/2 X_j X_{j+1} + (1-eta)/2 Y_j Y_{j+1} + h Z_j ].
struct ModelParams {
  double h = 0.0;
  double eta = 1.0;
  int n = 8;

  // Throws ParameterError unless h >= 0, |eta| <= 1, n even and n >= 4.
  void validate() const;
  static ModelParams make(double h, double eta, int n);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// plus: even number of up spins (antiperiodic fermions);
// minus: odd number of up spins (periodic fermions).
enum class Parity { plus, minus };

constexpr int sign_of(Parity p) { return p == Parity::plus ? 1 : -1; }
const char* to_string(Parity p);

struct SectorSpectrum {
  Parity sector = Parity::plus;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> epsilons;
  // -sum_k eps_k / 2, the energy of the quasiparticle vacuum.
  double reference_energy = 0.0;
  // Quasiparticle count parity (0 even, 1 odd) required for a state to lie
  // in this sector.
  int required_parity = 0;
  double ground_energy = 0.0;
};

struct GapInfo {
  double e0 = 0.0;
  int d0 = 1;
  double delta = 0.0;
  double tol_deg = 0.0;
  double e0_plus = 0.0;
  double e0_minus = 0.0;
  // Sector hosting the lowest level; plus on exact ties.
  Parity ground_sector = Parity::plus;
};

// theta_k = (2k-1) pi / n (plus) or 2 k pi / n (minus), k = 1..n.
std::vector<double> momentum_grid(const ModelParams& params, Parity sector);

// Bogoliubov angle in [0, pi/2]:  tan 2phi = -eta sin(theta) / (h + cos(theta)),
// sin 2phi >= 0 and eta sin(theta) sin 2phi - (h + cos theta) cos 2phi >= 0.
//
// The pair (k, -k) shares one rotation, so the angle depends on eta sin(theta)
// only through its magnitude; for 0 <= theta <= pi and eta >= 0 both defining
// relations hold literally. Where h + cos(theta) and eta sin(theta) vanish
// together the left limit (theta increasing towards the point) is returned.
double bogoliubov_angle(double theta, double h, double eta);

// eps = 2 sqrt((h + cos theta)^2 + eta^2 sin^2 theta)
double quasiparticle_energy(double theta, double h, double eta);

SectorSpectrum sector_spectrum(const ModelParams& params, Parity sector);

double default_degeneracy_tol(double e0);

// Ground energy, ground degeneracy (1 or 2) and first gap from the
// quasiparticle occupancy rules of both parity sectors. A non-positive or
// absent tol_deg selects default_degeneracy_tol.
GapInfo gap_info(const ModelParams& params, std::optional<double> tol_deg = std::nullopt);

// Lower bound on half the smallest quasiparticle energy used by the
// population-exponent bounds: |h-1| for h >= 1-eta^2, otherwise
// |eta| sqrt(1-eta^2-h^2)/sqrt(1-eta^2).
double gap_bound_delta(double h, double eta);

// eta -> -eta. Spectra and entanglement are unchanged: the two Hamiltonians are
// related by U = prod_i (1 + i Z_i)/sqrt(2).
ModelParams eta_sign_map(const ModelParams& params);

// prod_{k=1}^{N'} cos(phi_k(1+dh) - phi_k(1-dh)) with N' = n/2 (plus) or
// n/2 - 1 (minus): overlap of the sector ground states on either side of h = 1.
double vline_overlap(double eta, double dh, int n, Parity sector);

// Every level of one parity sector, ascending, by enumerating quasiparticle
// occupations. Exponential cost; n <= 16.
std::vector<double> sector_levels(const ModelParams& params, Parity sector);

}  // namespace xylab
