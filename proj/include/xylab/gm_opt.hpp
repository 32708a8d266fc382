#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xylab/ed_engine.hpp"
#include "xylab/model_core.hpp"
#include "xylab/spin_state.hpp"

namespace xylab {

struct ProductState {
  std::vector<Spinor> spinors;

  int n() const { return static_cast<int>(spinors.size()); }
  // Unit spinors with the first non-negligible component real and positive.
  void canonicalize();
  SpinState to_state() const;

  static ProductState uniform(int n, const Spinor& s);
};

// Lexicographic order on canonical spinor components (re, im), site 0 first.
bool lexicographically_less(const ProductState& a, const ProductState& b);

// Orthonormal basis of the support of rho = P / d, P the projector onto it.
class GroundSupport {
 public:
  explicit GroundSupport(std::vector<SpinState> states, std::optional<ModelParams> source = std::nullopt);

  int rank() const { return static_cast<int>(states_.size()); }
  int n() const { return states_.front().n(); }
  const std::vector<SpinState>& states() const { return states_; }
  const std::optional<ModelParams>& source() const { return source_; }

 private:
  std::vector<SpinState> states_;
  std::optional<ModelParams> source_;
};

struct GMOptions {
  int restarts = 16;
  int max_sweeps = 500;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct GMResult {
  double lambda_sq = 0.0;
  double g_bits = 0.0;
  ProductState best;
  int restarts_used = 0;
  int sweeps = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  int d0 = 1;
  // Which initialization produced `best`: "ansatz", "all-down" or "random".
  std::string best_start;
};

// <Phi| rho |Phi> = (1/d) sum_i |<Phi|psi_i>|^2.
double objective(const GroundSupport& support, const ProductState& phi);

// <Phi|psi> by sequential single-site contraction.
cplx product_overlap(const ProductState& phi, const SpinState& psi);

// One alternating-maximization pass over sites 0..n-1. Each spinor is replaced
// by the principal eigenvector of its effective 2x2 matrix, so the objective
// never decreases. If `trace` is given, the objective after each site update
// is appended to it.
ProductState site_sweep(const GroundSupport& support, ProductState phi, std::vector<double>* trace = nullptr);

// Alternating sweeps from one starting point until the per-sweep gain drops
// below tol or max_sweeps is reached.
struct LocalResult {
  ProductState phi;
  double value = 0.0;
  int sweeps = 0;
  bool converged = false;
};
LocalResult maximize_from(const GroundSupport& support, ProductState start, int max_sweeps, double tol);

// Best of: the translation-invariant real ansatz (181-point angle scan), the
// all-down state, and `restarts` seeded random product states.
GMResult geometric_measure(const GroundSupport& support, const GMOptions& opts = {});

// Ground support of the chain: the lowest state of the ground sector, plus the
// lowest state of the other sector when gap_info reports d0 = 2.
GroundSupport ground_support(const ModelParams& params, std::optional<double> tol_deg = std::nullopt,
                             const GroundSpaceOptions& ed = {});

GMResult gm_of_ground_state(const ModelParams& params, std::optional<double> tol_deg = std::nullopt,
                            const GMOptions& opts = {});

struct RobustnessBound {
  double value = 0.0;
  // True when the bound is <= 0 and therefore carries no information.
  bool vacuous = false;
};

// d (1 + R(P/d)) >= 2^G  =>  R >= 2^G / d - 1.
RobustnessBound robustness_lower_bound(double g_bits, int d);

}  // namespace xylab
