#include "xylab/ed_engine.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "xylab/errors.hpp"

namespace xylab {

namespace {

void require_size(const ModelParams& params, int limit, const char* what) {
  params.validate();
  if (params.n > limit) {
    std::ostringstream os;
    os << what << " supports n <= " << limit << ", got n=" << params.n;
    throw CapacityError(os.str());
  }
}

struct Bond {
  int p;  // bit positions of the two sites
  int q;
  std::uint64_t mask;
};

std::vector<Bond> bonds_of(int n) {
  std::vector<Bond> bonds;
  for (int j = 0; j < n; ++j) {
    const int p = site_bit(n, j);
    const int q = site_bit(n, (j + 1) % n);
    bonds.push_back({p, q, (std::uint64_t{1} << p) | (std::uint64_t{1} << q)});
  }
  return bonds;
}

// <s'| H |s> for s' = s ^ bond.mask: -eta for parallel spins, -1 for antiparallel.
inline double flip_amplitude(std::uint64_t s, const Bond& b, double eta) {
  const bool parallel = ((s >> b.p) & 1U) == ((s >> b.q) & 1U);
  return parallel ? -eta : -1.0;
}

inline double diagonal(std::uint64_t s, int n, double h) {
  return -h * (2.0 * std::popcount(s) - n);
}

// Symmetric eigendecomposition in place; eigenvalues ascending.
Eigen::VectorXd syevd(Eigen::MatrixXd& a, bool vectors) {
  const auto dim = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(dim);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', dim, a.data(), dim, w.data());
  if (info != 0) {
    std::ostringstream os;
    os << "dsyevd failed with info=" << info;
    throw ConvergenceError(os.str());
  }
  return w;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

std::uint64_t SectorBasis::state(std::uint64_t index) const {
  const auto odd = static_cast<std::uint64_t>(std::popcount(index) & 1);
  const std::uint64_t want_odd = parity_ == Parity::plus ? 0 : 1;
  return (index << 1) | (odd ^ want_odd);
}

SpinState SectorBasis::embed(const Eigen::VectorXd& sector_vector) const {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_);
  for (std::uint64_t i = 0; i < dim(); ++i) full(static_cast<Eigen::Index>(state(i))) = sector_vector(i);
  return SpinState(n_, std::move(full));
}

SectorHamiltonian::SectorHamiltonian(const ModelParams& params, Parity parity)
    : params_(params), basis_(params.n, parity) {
  require_size(params, kIterativeLimit, "sector Hamiltonian");
}

void SectorHamiltonian::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const int n = params_.n;
  const std::vector<Bond> bonds = bonds_of(n);
  const auto dim = static_cast<Eigen::Index>(basis_.dim());
  y.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::uint64_t s = basis_.state(static_cast<std::uint64_t>(i));
    double acc = diagonal(s, n, params_.h) * x(i);
    for (const Bond& b : bonds) {
      acc += flip_amplitude(s, b, params_.eta) * x(static_cast<Eigen::Index>(SectorBasis::index(s ^ b.mask)));
    }
    y(i) = acc;
  }
}

Eigen::MatrixXd SectorHamiltonian::dense() const {
  if (params_.n > kDenseLimit) throw CapacityError("dense sector matrix supports n <= 12");
  const int n = params_.n;
  const std::vector<Bond> bonds = bonds_of(n);
  const auto dim = static_cast<Eigen::Index>(basis_.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::uint64_t s = basis_.state(static_cast<std::uint64_t>(i));
    m(i, i) += diagonal(s, n, params_.h);
    for (const Bond& b : bonds) {
      m(static_cast<Eigen::Index>(SectorBasis::index(s ^ b.mask)), i) += flip_amplitude(s, b, params_.eta);
    }
  }
  return m;
}

Eigen::SparseMatrix<double> build_hamiltonian(const ModelParams& params) {
  require_size(params, kSparseMatrixLimit, "build_hamiltonian");
  const int n = params.n;
  const std::vector<Bond> bonds = bonds_of(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(dim * (bonds.size() + 1));
  for (std::uint64_t s = 0; s < dim; ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    triplets.emplace_back(col, col, diagonal(s, n, params.h));
    for (const Bond& b : bonds) {
      triplets.emplace_back(static_cast<Eigen::Index>(s ^ b.mask), col, flip_amplitude(s, b, params.eta));
    }
  }
  Eigen::SparseMatrix<double> h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

SpectrumResult sector_full_spectrum(const ModelParams& params, Parity sector, bool with_vectors) {
  require_size(params, kDenseLimit, "full_spectrum");
  SectorHamiltonian ham(params, sector);
  Eigen::MatrixXd m = ham.dense();
  const Eigen::VectorXd w = syevd(m, with_vectors);
  SpectrumResult out;
  out.eigenvalues.assign(w.data(), w.data() + w.size());
  out.parities.assign(out.eigenvalues.size(), sign_of(sector));
  if (with_vectors) {
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
      Eigen::VectorXd v = m.col(i);
      fix_sign(v);
      out.eigenvectors.push_back(ham.basis().embed(v));
    }
  }
  return out;
}

namespace {

SpectrumResult merge(SpectrumResult a, SpectrumResult b, std::size_t keep) {
  std::vector<std::size_t> order(a.eigenvalues.size() + b.eigenvalues.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t na = a.eigenvalues.size();
  auto value = [&](std::size_t i) { return i < na ? a.eigenvalues[i] : b.eigenvalues[i - na]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return value(x) < value(y); });
  if (order.size() > keep) order.resize(keep);

  SpectrumResult out;
  const bool vectors = !a.eigenvectors.empty() || !b.eigenvectors.empty();
  const bool residuals = !a.residuals.empty() || !b.residuals.empty();
  for (std::size_t i : order) {
    SpectrumResult& src = i < na ? a : b;
    const std::size_t j = i < na ? i : i - na;
    out.eigenvalues.push_back(src.eigenvalues[j]);
    out.parities.push_back(src.parities[j]);
    if (vectors) out.eigenvectors.push_back(std::move(src.eigenvectors[j]));
    if (residuals) out.residuals.push_back(src.residuals[j]);
  }
  return out;
}

}  // namespace

SpectrumResult full_spectrum(const ModelParams& params, bool with_vectors) {
  SpectrumResult plus = sector_full_spectrum(params, Parity::plus, with_vectors);
  SpectrumResult minus = sector_full_spectrum(params, Parity::minus, with_vectors);
  const std::size_t total = plus.eigenvalues.size() + minus.eigenvalues.size();
  return merge(std::move(plus), std::move(minus), total);
}

SpectrumResult sector_lowest(const ModelParams& params, Parity sector, int k, const GroundSpaceOptions& opts) {
  require_size(params, kIterativeLimit, "ground_space");
  if (k < 1 || k > 8) throw ParameterError("ground_space: k must lie in 1..8");
  SectorHamiltonian ham(params, sector);
  const auto dim = static_cast<Eigen::Index>(ham.basis().dim());
  const int kk = static_cast<int>(std::min<Eigen::Index>(k, dim));

  SpectrumResult out;
  if (dim <= 256) {
    Eigen::MatrixXd m = ham.dense();
    const Eigen::VectorXd w = syevd(m, true);
    Eigen::VectorXd hv(dim);
    for (int i = 0; i < kk; ++i) {
      Eigen::VectorXd v = m.col(i);
      fix_sign(v);
      ham.apply(v, hv);
      out.eigenvalues.push_back(w(i));
      out.residuals.push_back((hv - w(i) * v).norm());
      out.eigenvectors.push_back(ham.basis().embed(v));
    }
  } else {
    LanczosOptions lo;
    lo.tol = opts.tol;
    lo.seed = opts.seed + (sector == Parity::plus ? 0x9E3779B97F4A7C15ULL : 0xBF58476D1CE4E5B9ULL);
    const EigenPairs pairs = lowest_eigenpairs(
        [&ham](const Eigen::VectorXd& x, Eigen::VectorXd& y) { ham.apply(x, y); }, dim, kk, lo);
    for (int i = 0; i < kk; ++i) {
      out.eigenvalues.push_back(pairs.values(i));
      out.residuals.push_back(pairs.residuals[i]);
      out.eigenvectors.push_back(ham.basis().embed(pairs.vectors.col(i)));
    }
  }
  out.parities.assign(out.eigenvalues.size(), sign_of(sector));
  return out;
}

SpectrumResult ground_space(const ModelParams& params, int k, const GroundSpaceOptions& opts) {
  SpectrumResult plus = sector_lowest(params, Parity::plus, k, opts);
  SpectrumResult minus = sector_lowest(params, Parity::minus, k, opts);
  return merge(std::move(plus), std::move(minus), static_cast<std::size_t>(k));
}

double parity_expectation(const SpinState& state) {
  const Eigen::VectorXcd& a = state.amplitudes();
  double acc = 0.0;
  for (Eigen::Index s = 0; s < a.size(); ++s) {
    const double w = std::norm(a(s));
    acc += (std::popcount(static_cast<std::uint64_t>(s)) & 1) ? -w : w;
  }
  return acc / a.squaredNorm();
}

int parity_of(const SpinState& state) {
  const double e = parity_expectation(state);
  if (std::abs(e) > 1.0 - 1e-8) return e > 0.0 ? 1 : -1;
  std::ostringstream os;
  os << "state has mixed parity (expectation " << e << ")";
  throw ClassificationError(os.str());
}

CorrelationSet correlations(std::span<const SpinState> support) {
  if (support.empty()) throw ParameterError("correlations: empty support");
  const int n = support.front().n();
  const int rmax = n / 2;
  CorrelationSet c;
  c.cx.assign(rmax, 0.0);
  c.cy.assign(rmax, 0.0);
  c.cz.assign(rmax, 0.0);
  const double weight = 1.0 / static_cast<double>(support.size());
  const int p0 = site_bit(n, 0);
  for (const SpinState& st : support) {
    if (st.n() != n) throw ParameterError("correlations: support states differ in n");
    const Eigen::VectorXcd& a = st.amplitudes();
    for (Eigen::Index s = 0; s < a.size(); ++s) {
      const auto us = static_cast<std::uint64_t>(s);
      const double prob = std::norm(a(s));
      c.mz += weight * prob * (2.0 * std::popcount(us) - n) / n;
    }
    for (int r = 1; r <= rmax; ++r) {
      const int pr = site_bit(n, r);
      const std::uint64_t mask = (std::uint64_t{1} << p0) | (std::uint64_t{1} << pr);
      double xx = 0.0, yy = 0.0, zz = 0.0;
      for (Eigen::Index s = 0; s < a.size(); ++s) {
        const auto us = static_cast<std::uint64_t>(s);
        const bool parallel = ((us >> p0) & 1U) == ((us >> pr) & 1U);
        const double re = (std::conj(a(static_cast<Eigen::Index>(us ^ mask))) * a(s)).real();
        xx += re;
        yy += parallel ? -re : re;
        zz += parallel ? std::norm(a(s)) : -std::norm(a(s));
      }
      c.cx[r - 1] += weight * xx;
      c.cy[r - 1] += weight * yy;
      c.cz[r - 1] += weight * zz;
    }
  }
  return c;
}

std::tuple<SpinState, SpinState, SpinState> c_line_states(double eta, int n) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("c_line_states requires 0 < eta <= 1");
  if (n < 2) throw ParameterError("c_line_states requires n >= 2");
  const double cos_theta = std::sqrt((1.0 - eta) / (1.0 + eta));
  const double half = 0.5 * std::acos(cos_theta);
  const Spinor plus_spinor(std::sin(half), std::cos(half));
  const Spinor minus_spinor(-std::sin(half), std::cos(half));
  const std::vector<Spinor> ps(n, plus_spinor);
  const std::vector<Spinor> ms(n, minus_spinor);
  SpinState tp = product_state(ps);
  SpinState tm = product_state(ms);
  const double overlap = std::pow(cos_theta, n);
  Eigen::VectorXcd perp = (tm.amplitudes() - overlap * tp.amplitudes()) / std::sqrt(1.0 - overlap * overlap);
  return {std::move(tp), std::move(tm), SpinState(n, std::move(perp))};
}

std::vector<double> boltzmann_populations(std::span<const double> energies, double temperature) {
  if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
  if (energies.empty()) return {};
  const double emin = *std::min_element(energies.begin(), energies.end());
  std::vector<double> p(energies.size());
  double z = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    p[i] = std::exp(-(energies[i] - emin) / temperature);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

}  // namespace xylab
