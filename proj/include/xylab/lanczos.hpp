#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

namespace xylab {

// y = A x for a real symmetric operator.
using LinearOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct LanczosOptions {
  int max_basis = 40;
  int max_restarts = 400;
  double tol = 1e-10;
  std::uint64_t seed = 20240601;
};

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, unit norm
  std::vector<double> residuals;
  int matvecs = 0;
};

// Thick-restart Lanczos with full reorthogonalization for the k lowest
// eigenpairs. A single Krylov sequence resolves one vector per eigenvalue,
// so exact multiplicities beyond one are not guaranteed to be found.
// Throws ConvergenceError when the restart budget is exhausted.
EigenPairs lowest_eigenpairs(const LinearOperator& apply, Eigen::Index dim, int k,
                             const LanczosOptions& opts = {});

}  // namespace xylab
