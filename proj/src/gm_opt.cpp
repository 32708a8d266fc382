#include "xylab/gm_opt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "xylab/errors.hpp"
#include "xylab/parallel.hpp"

namespace xylab {

namespace {

constexpr double kTieTol = 1e-13;
constexpr int kAnsatzPoints = 181;

Spinor canonical(Spinor s) {
  const double nrm = s.norm();
  if (nrm > 0.0) s /= nrm;
  for (int c = 0; c < 2; ++c) {
    const double mag = std::abs(s(c));
    if (mag > 1e-12) {
      s *= std::conj(s(c)) / mag;
      s(c) = cplx(mag, 0.0);
      break;
    }
  }
  return s;
}

// Principal eigenvector of a 2x2 Hermitian matrix; `fallback` when the top
// eigenvalue is degenerate.
Spinor principal_vector(const Eigen::Matrix2cd& m, const Spinor& fallback, double& top) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx c = m(0, 1);
  const double half = 0.5 * (a - d);
  top = 0.5 * (a + d) + std::sqrt(half * half + std::norm(c));
  Spinor x1(c, top - a);
  Spinor x2(top - d, std::conj(c));
  Spinor& x = x1.squaredNorm() >= x2.squaredNorm() ? x1 : x2;
  const double nrm = x.norm();
  if (!(nrm > 1e-150)) return fallback;
  return canonical(x / nrm);
}

// out[i] = conj(s0) in[2i] + conj(s1) in[2i+1]; contracts the least significant site.
void contract_last(const cplx* in, std::size_t out_size, const Spinor& s, cplx* out) {
  const cplx s0 = std::conj(s(0));
  const cplx s1 = std::conj(s(1));
  for (std::size_t i = 0; i < out_size; ++i) out[i] = s0 * in[2 * i] + s1 * in[2 * i + 1];
}

// Contracts sites n-1 .. first+1 of a tensor whose leading site is `first`.
// Returns the remaining 2-vector indexed by the value of site `first`.
Spinor contract_tail(const cplx* data, int n, int first, const std::vector<Spinor>& phi, std::vector<cplx>& work) {
  const int m = n - first;
  if (m == 1) return Spinor(data[0], data[1]);
  std::size_t size = std::size_t{1} << (m - 1);
  contract_last(data, size, phi[n - 1], work.data());
  for (int site = n - 2; site > first; --site) {
    size >>= 1;
    contract_last(work.data(), size, phi[site], work.data());
  }
  return Spinor(work[0], work[1]);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ProductState random_product(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ProductState p;
  p.spinors.reserve(n);
  for (int j = 0; j < n; ++j) {
    Spinor s(cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)));
    p.spinors.push_back(canonical(s));
  }
  return p;
}

ProductState ansatz_scan(const GroundSupport& support) {
  ProductState best;
  double best_value = -1.0;
  for (int i = 0; i < kAnsatzPoints; ++i) {
    const double xi = i * std::numbers::pi / (kAnsatzPoints - 1);
    ProductState p = ProductState::uniform(support.n(), Spinor(std::cos(xi), std::sin(xi)));
    const double v = objective(support, p);
    if (v > best_value) {
      best_value = v;
      best = std::move(p);
    }
  }
  return best;
}

}  // namespace

void ProductState::canonicalize() {
  for (Spinor& s : spinors) s = canonical(s);
}

SpinState ProductState::to_state() const { return product_state(spinors); }

ProductState ProductState::uniform(int n, const Spinor& s) {
  ProductState p;
  p.spinors.assign(n, canonical(s));
  return p;
}

bool lexicographically_less(const ProductState& a, const ProductState& b) {
  for (std::size_t j = 0; j < std::min(a.spinors.size(), b.spinors.size()); ++j) {
    for (int c = 0; c < 2; ++c) {
      const cplx x = a.spinors[j](c);
      const cplx y = b.spinors[j](c);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  }
  return a.spinors.size() < b.spinors.size();
}

GroundSupport::GroundSupport(std::vector<SpinState> states, std::optional<ModelParams> source)
    : states_(std::move(states)), source_(source) {
  if (states_.empty()) throw ParameterError("ground support needs at least one state");
  const int n = states_.front().n();
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].n() != n) throw ParameterError("ground support states differ in n");
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx g = inner(states_[j], states_[i]);
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(g - expect) > 1e-10) {
        std::ostringstream os;
        os << "ground support is not orthonormal: <" << j << "|" << i << "> = " << g;
        throw ParameterError(os.str());
      }
    }
  }
}

cplx product_overlap(const ProductState& phi, const SpinState& psi) {
  if (phi.n() != psi.n()) throw ParameterError("product state and support differ in n");
  std::vector<cplx> work(std::size_t{1} << std::max(0, psi.n() - 1));
  const Spinor v = contract_tail(psi.amplitudes().data(), psi.n(), 0, phi.spinors, work);
  return std::conj(phi.spinors[0](0)) * v(0) + std::conj(phi.spinors[0](1)) * v(1);
}

double objective(const GroundSupport& support, const ProductState& phi) {
  double acc = 0.0;
  for (const SpinState& psi : support.states()) acc += std::norm(product_overlap(phi, psi));
  return acc / support.rank();
}

ProductState site_sweep(const GroundSupport& support, ProductState phi, std::vector<double>* trace) {
  const int n = support.n();
  if (phi.n() != n) throw ParameterError("product state and support differ in n");
  const int d = support.rank();
  const double weight = 1.0 / d;
  const std::size_t half_dim = std::size_t{1} << (n - 1);

  // Left environments: ψ contracted with the updated spinors of sites < j.
  std::vector<std::vector<cplx>> env(d, std::vector<cplx>(half_dim));
  std::vector<std::vector<cplx>> next(d, std::vector<cplx>(half_dim));
  std::vector<cplx> work(half_dim);
  std::vector<const cplx*> left(d);
  for (int i = 0; i < d; ++i) left[i] = support.states()[i].amplitudes().data();

  for (int j = 0; j < n; ++j) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    std::vector<Spinor> partial(d);
    for (int i = 0; i < d; ++i) {
      partial[i] = contract_tail(left[i], n, j, phi.spinors, work);
      m.noalias() += weight * partial[i] * partial[i].adjoint();
    }
    double top = 0.0;
    phi.spinors[j] = principal_vector(m, phi.spinors[j], top);
    if (trace) trace->push_back(top);

    if (j + 1 == n) break;
    const std::size_t half = std::size_t{1} << (n - j - 1);
    const cplx s0 = std::conj(phi.spinors[j](0));
    const cplx s1 = std::conj(phi.spinors[j](1));
    for (int i = 0; i < d; ++i) {
      const cplx* src = left[i];
      cplx* dst = next[i].data();
      for (std::size_t r = 0; r < half; ++r) dst[r] = s0 * src[r] + s1 * src[r + half];
      std::swap(env[i], next[i]);
      left[i] = env[i].data();
    }
  }
  return phi;
}

LocalResult maximize_from(const GroundSupport& support, ProductState start, int max_sweeps, double tol) {
  LocalResult out;
  out.phi = std::move(start);
  out.phi.canonicalize();
  out.value = objective(support, out.phi);
  std::vector<double> trace;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    trace.clear();
    out.phi = site_sweep(support, std::move(out.phi), &trace);
    const double value = trace.back();
    ++out.sweeps;
    const double gain = value - out.value;
    out.value = std::max(out.value, value);
    if (gain < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

GMResult geometric_measure(const GroundSupport& support, const GMOptions& opts) {
  if (opts.restarts < 1) throw ParameterError("geometric_measure requires restarts >= 1");
  const int n = support.n();
  const std::size_t runs = static_cast<std::size_t>(opts.restarts) + 2;
  std::vector<LocalResult> results(runs);

  parallel_for(runs, opts.threads, [&](std::size_t r) {
    ProductState start;
    if (r == 0) {
      start = ansatz_scan(support);
    } else if (r == 1) {
      start = ProductState::uniform(n, Spinor(1.0, 0.0));
    } else {
      start = random_product(n, splitmix(opts.seed ^ splitmix(r)));
    }
    results[r] = maximize_from(support, std::move(start), opts.max_sweeps, opts.tol);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs; ++r) {
    const double diff = results[r].value - results[best].value;
    if (diff > kTieTol || (std::abs(diff) <= kTieTol && lexicographically_less(results[r].phi, results[best].phi))) {
      best = r;
    }
  }

  GMResult out;
  out.lambda_sq = std::min(1.0, results[best].value);
  out.g_bits = std::max(0.0, -std::log2(out.lambda_sq));
  out.best = results[best].phi;
  out.restarts_used = static_cast<int>(runs);
  out.sweeps = results[best].sweeps;
  out.converged = results[best].converged;
  out.seed = opts.seed;
  out.d0 = support.rank();
  out.best_start = best == 0 ? "ansatz" : best == 1 ? "all-down" : "random";
  return out;
}

GroundSupport ground_support(const ModelParams& params, std::optional<double> tol_deg, const GroundSpaceOptions& ed) {
  const GapInfo gap = gap_info(params, tol_deg);
  std::vector<SpinState> states;
  SpectrumResult first = sector_lowest(params, gap.ground_sector, 1, ed);
  states.push_back(std::move(first.eigenvectors.front()));
  if (gap.d0 == 2) {
    const Parity other = gap.ground_sector == Parity::plus ? Parity::minus : Parity::plus;
    SpectrumResult second = sector_lowest(params, other, 1, ed);
    states.push_back(std::move(second.eigenvectors.front()));
  }
  return GroundSupport(std::move(states), params);
}

GMResult gm_of_ground_state(const ModelParams& params, std::optional<double> tol_deg, const GMOptions& opts) {
  return geometric_measure(ground_support(params, tol_deg), opts);
}

RobustnessBound robustness_lower_bound(double g_bits, int d) {
  if (d < 1) throw ParameterError("support rank must be >= 1");
  if (!(g_bits >= 0.0)) throw ParameterError("geometric measure must be >= 0");
  RobustnessBound b;
  b.value = std::exp2(g_bits) / d - 1.0;
  b.vacuous = !(b.value > 0.0);
  return b;
}

}  // namespace xylab
