#pragma once

#include <Eigen/Sparse>

#include "ufd/weights.hpp"

namespace ufd {

/// Generalized eigenproblem S g = lambda M g for the weighted Dirichlet
/// form: S is assembled from the face list (so g' S g equals the discrete
/// Dirichlet form exactly), M is the diagonal of cell masses m_i * vol.
struct DiscreteOperators {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;  // diagonal entries
};

DiscreteOperators assemble_operators(const Equilibrium& eq);

struct SpectralGapResult {
  double lambda1 = 0.0;
  double poincare_const = 0.0;  // 1 / lambda1
  int iterations = 0;
  double residual = 0.0;        // ||S g - lambda M g|| / (lambda ||M g||)
  Eigen::VectorXd mode;         // M-normalized, mass-orthogonal to constants
};

/// Smallest nonzero eigenvalue by shifted inverse iteration with mean-zero
/// projection. Throws NumericalError if the residual tolerance is not met
/// within `max_iterations`.
SpectralGapResult spectral_gap(const Equilibrium& eq, double tol = 1e-10,
                               int max_iterations = 500);

/// Slack of the discrete Poincare inequality for one test vector:
/// C_P * Dirichlet(g) - Var_m(g). Non-negative (to rounding) for every g
/// when C_P comes from spectral_gap on the same equilibrium.
double poincare_check(std::span<const double> g, const Equilibrium& eq,
                      double poincare_const);

/// Variance of g under the cell-mass measure (mean removed exactly).
double weighted_variance(std::span<const double> g, const Equilibrium& eq);

}  // namespace ufd
