#include "ufd/poincare.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <vector>

#include "ufd/csv.hpp"
#include "ufd/errors.hpp"
#include "ufd/functionals.hpp"

namespace ufd {

DiscreteOperators assemble_operators(const Equilibrium& eq) {
  const Grid& grid = eq.grid();
  const int n = grid.n_cells();
  const auto m = eq.m();
  const double h = grid.spacing();
  const double scale = grid.face_volume() / (h * h);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(grid.faces().size() * 4 + static_cast<std::size_t>(n));
  for (const Face& face : grid.faces()) {
    const int a = face.a;
    const int b = face.b;
    const double w = 0.5 * (m[static_cast<std::size_t>(a)] + m[static_cast<std::size_t>(b)]) * scale;
    trips.emplace_back(a, a, w);
    trips.emplace_back(b, b, w);
    trips.emplace_back(a, b, -w);
    trips.emplace_back(b, a, -w);
  }
  DiscreteOperators ops;
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(trips.begin(), trips.end());
  ops.mass.resize(n);
  for (int i = 0; i < n; ++i)
    ops.mass[i] = m[static_cast<std::size_t>(i)] * grid.cell_volume();
  return ops;
}

namespace {

// Remove the M-weighted mean so the iterate stays orthogonal to the
// constant kernel vector.
void project_mean_zero(Eigen::VectorXd& v, const Eigen::VectorXd& mass, double total_mass) {
  const double mean = mass.dot(v) / total_mass;
  v.array() -= mean;
}

}  // namespace

SpectralGapResult spectral_gap(const Equilibrium& eq, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw ParameterError("spectral gap tolerance must be positive");
  if (max_iterations < 1) throw ParameterError("spectral gap needs at least one iteration");

  const DiscreteOperators ops = assemble_operators(eq);
  const int n = static_cast<int>(ops.mass.size());
  const double total_mass = ops.mass.sum();

  // Small definite shift: keeps the factorization nonsingular without
  // slowing the iteration (sigma well below the first eigenvalue scale).
  double diag_sum = 0.0;
  for (int i = 0; i < n; ++i) diag_sum += ops.stiffness.coeff(i, i);
  const double sigma = 1e-3 * diag_sum / total_mass / n;

  Eigen::SparseMatrix<double> shifted = ops.stiffness;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma * ops.mass[i];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectral gap: factorization of the shifted operator failed");

  const Grid& grid = eq.grid();
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = grid.x(i) + (grid.dim() == 2 ? 0.618 * grid.y(i) : 0.0);
  project_mean_zero(v, ops.mass, total_mass);
  double vnorm = std::sqrt(v.dot(ops.mass.asDiagonal() * v));
  if (!(vnorm > 0.0)) throw NumericalError("spectral gap: degenerate start vector");
  v /= vnorm;

  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd w = solver.solve(ops.mass.asDiagonal() * v);
    if (solver.info() != Eigen::Success)
      throw NumericalError("spectral gap: inverse iteration solve failed");
    project_mean_zero(w, ops.mass, total_mass);
    const double wnorm = std::sqrt(w.dot(ops.mass.asDiagonal() * w));
    if (!(wnorm > 0.0))
      throw NumericalError("spectral gap: iterate collapsed to the kernel");
    w /= wnorm;

    const Eigen::VectorXd sw = ops.stiffness * w;
    const Eigen::VectorXd mw = ops.mass.asDiagonal() * w;
    lambda = w.dot(sw);  // Rayleigh quotient; w is M-normalized
    residual = (sw - lambda * mw).norm() / (lambda * mw.norm());
    v = w;
    if (residual <= tol) {
      SpectralGapResult out;
      out.lambda1 = lambda;
      out.poincare_const = 1.0 / lambda;
      out.iterations = it;
      out.residual = residual;
      out.mode = std::move(v);
      return out;
    }
  }
  throw NumericalError("spectral gap: no convergence after " +
                       std::to_string(max_iterations) + " iterations (residual " +
                       format_double(residual) + ")");
}

double weighted_variance(std::span<const double> g, const Equilibrium& eq) {
  const Grid& grid = eq.grid();
  if (static_cast<int>(g.size()) != grid.n_cells())
    throw DimensionError("weighted_variance: field size does not match the grid");
  const auto m = eq.m();
  std::vector<double> mg(g.size()), mm(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    mg[i] = m[i] * g[i];
    mm[i] = m[i];
  }
  const double total = grid.integrate(mm);
  const double mean = grid.integrate(mg) / total;
  std::vector<double> dev(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g[i] - mean;
    dev[i] = m[i] * d * d;
  }
  return grid.integrate(dev);
}

double poincare_check(std::span<const double> g, const Equilibrium& eq,
                      double poincare_const) {
  if (!(poincare_const > 0.0))
    throw ParameterError("the Poincare constant must be positive");
  return poincare_const * dirichlet_form(g, eq) - weighted_variance(g, eq);
}

}  // namespace ufd
