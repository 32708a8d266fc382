#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "xylab/lanczos.hpp"
#include "xylab/model_core.hpp"
#include "xylab/spin_state.hpp"

namespace xylab {

inline constexpr int kDenseLimit = 12;
inline constexpr int kIterativeLimit = 20;
inline constexpr int kSparseMatrixLimit = 14;

struct SpectrumResult {
  std::vector<double> eigenvalues;   // ascending
  std::vector<SpinState> eigenvectors;  // empty unless requested
  std::vector<int> parities;         // +1 / -1 per eigenvalue
  std::vector<double> residuals;     // iterative solver only
};

struct CorrelationSet {
  // Entry r-1 holds C(r) = <s_1 s_{r+1}>, r = 1..n/2.
  std::vector<double> cx;
  std::vector<double> cy;
  std::vector<double> cz;
  double mz = 0.0;
};

// Basis of one parity sector. Exactly one of 2i, 2i+1 has each popcount
// parity, so the sector index of a basis state s is s >> 1.
class SectorBasis {
 public:
  SectorBasis(int n, Parity parity) : n_(n), parity_(parity) {}

  int n() const { return n_; }
  Parity parity() const { return parity_; }
  std::uint64_t dim() const { return std::uint64_t{1} << (n_ - 1); }
  std::uint64_t state(std::uint64_t index) const;
  static std::uint64_t index(std::uint64_t state) { return state >> 1; }

  SpinState embed(const Eigen::VectorXd& sector_vector) const;

 private:
  int n_;
  Parity parity_;
};

// Matrix-free Hamiltonian restricted to one parity sector (real symmetric).
class SectorHamiltonian {
 public:
  SectorHamiltonian(const ModelParams& params, Parity parity);

  const SectorBasis& basis() const { return basis_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::MatrixXd dense() const;

 private:
  ModelParams params_;
  SectorBasis basis_;
};

// Full 2^n sparse Hamiltonian, n <= kSparseMatrixLimit.
Eigen::SparseMatrix<double> build_hamiltonian(const ModelParams& params);

// Dense diagonalization of both parity sectors, n <= kDenseLimit.
SpectrumResult full_spectrum(const ModelParams& params, bool with_vectors = false);
// Dense diagonalization of one sector.
SpectrumResult sector_full_spectrum(const ModelParams& params, Parity sector, bool with_vectors = false);

struct GroundSpaceOptions {
  double tol = 1e-10;
  std::uint64_t seed = 20240601;
};

// k lowest eigenvalues per parity sector, merged; the k lowest overall are
// returned with vectors. n <= kIterativeLimit.
SpectrumResult ground_space(const ModelParams& params, int k, const GroundSpaceOptions& opts = {});

// Lowest k eigenpairs of one sector (k <= 8).
SpectrumResult sector_lowest(const ModelParams& params, Parity sector, int k,
                             const GroundSpaceOptions& opts = {});

// +1 or -1 for a state of definite parity; throws ClassificationError otherwise.
int parity_of(const SpinState& state);
double parity_expectation(const SpinState& state);

// Correlations averaged uniformly over the given orthonormal support.
CorrelationSet correlations(std::span<const SpinState> support);

// |Theta+>, |Theta->, |Theta+perp> with cos Theta = sqrt((1-eta)/(1+eta)).
std::tuple<SpinState, SpinState, SpinState> c_line_states(double eta, int n);

// Boltzmann weights exp(-E_i/T)/Z for each listed level.
std::vector<double> boltzmann_populations(std::span<const double> energies, double temperature);

}  // namespace xylab
