#include "xylab/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "xylab/errors.hpp"

namespace xylab {

namespace {

Eigen::VectorXd random_unit(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
  return v / v.norm();
}

// Two passes of classical Gram-Schmidt against the first `cols` basis vectors.
// Returns the accumulated projection coefficients.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols, Eigen::VectorXd& w) {
  auto block = basis.leftCols(cols);
  Eigen::VectorXd c = block.transpose() * w;
  w.noalias() -= block * c;
  Eigen::VectorXd c2 = block.transpose() * w;
  w.noalias() -= block * c2;
  return c + c2;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

EigenPairs lowest_eigenpairs(const LinearOperator& apply, Eigen::Index dim, int k,
                             const LanczosOptions& opts) {
  if (k < 1 || k > dim) throw ParameterError("lanczos: need 1 <= k <= dim");
  const Eigen::Index m = std::min<Eigen::Index>(dim, std::max(opts.max_basis, 2 * k + 8));
  const Eigen::Index keep = std::min<Eigen::Index>(m - 1, k + std::max(k, 6));

  std::mt19937_64 rng(opts.seed);
  Eigen::MatrixXd basis(dim, m);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m, m);
  basis.col(0) = random_unit(dim, rng);

  Eigen::Index start = 0;
  Eigen::VectorXd w(dim);
  Eigen::VectorXd residual(dim);
  double beta = 0.0;
  int matvecs = 0;
  double scale = 0.0;

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    for (Eigen::Index j = start; j < m; ++j) {
      apply(basis.col(j), w);
      ++matvecs;
      const Eigen::VectorXd c = orthogonalize(basis, j + 1, w);
      proj.col(j).head(j + 1) = c;
      proj.row(j).head(j + 1) = c.transpose();
      scale = std::max(scale, std::abs(c(j)));
      beta = w.norm();
      if (j + 1 == m) break;
      if (beta <= 1e-14 * std::max(1.0, scale)) {
        // Invariant subspace: continue with a fresh direction, decoupled from it.
        Eigen::VectorXd fresh = random_unit(dim, rng);
        orthogonalize(basis, j + 1, fresh);
        basis.col(j + 1) = fresh / fresh.norm();
        proj(j + 1, j) = proj(j, j + 1) = 0.0;
      } else {
        basis.col(j + 1) = w / beta;
      }
    }
    residual = w;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& y = es.eigenvectors();

    bool converged = m == dim;
    if (!converged) {
      converged = true;
      for (int i = 0; i < k; ++i) {
        if (beta * std::abs(y(m - 1, i)) >= opts.tol) {
          converged = false;
          break;
        }
      }
    }

    if (converged) {
      EigenPairs out;
      out.values = theta.head(k);
      out.vectors = basis * y.leftCols(k);
      out.matvecs = matvecs;
      Eigen::VectorXd hv(dim);
      for (int i = 0; i < k; ++i) {
        out.vectors.col(i).normalize();
        fix_sign(out.vectors.col(i));
        apply(out.vectors.col(i), hv);
        out.residuals.push_back((hv - out.values(i) * out.vectors.col(i)).norm());
      }
      return out;
    }

    // Thick restart: keep the lowest Ritz vectors and the current residual direction.
    Eigen::MatrixXd ritz = basis * y.leftCols(keep);
    basis.leftCols(keep) = ritz;
    proj.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) proj(i, i) = theta(i);
    Eigen::VectorXd next = residual;
    orthogonalize(basis, keep, next);
    const double nn = next.norm();
    if (nn <= 1e-14 * std::max(1.0, scale)) {
      next = random_unit(dim, rng);
      orthogonalize(basis, keep, next);
      basis.col(keep) = next / next.norm();
    } else {
      basis.col(keep) = next / nn;
    }
    start = keep;
  }

  std::ostringstream os;
  os << "lanczos did not converge: dim=" << dim << " k=" << k << " restarts=" << opts.max_restarts
     << " matvecs=" << matvecs << " last beta=" << beta;
  throw ConvergenceError(os.str());
}

}  // namespace xylab
