#pragma once

#include <memory>
#include <vector>

#include "ufd/solver.hpp"
#include "ufd/weights.hpp"

namespace ufd {

/// Potential of an equilibrium density m = e^{-(shape + offset)}: `shape`
/// has min 0 at the origin and `offset` is the log normalizer ln Z, so
/// that e^{-potential} integrates to 1 over the whole space.
struct MPotential {
  PotentialSpec shape;
  double offset = 0.0;

  double value(double radius_sq) const { return shape.value(radius_sq) + offset; }
};

/// Potential of m for the equilibrium of (rho-potential, r): quadratic
/// shapes scale exactly (sigma_m = sigma sqrt(r+1), analytic offset);
/// power shapes pick up 1/(r+1) in the exponent and a quadrature offset.
MPotential m_potential(const PotentialSpec& rho_potential, double r);

struct LocalizedWeight {
  double a_k = 0.0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> m;  // e^{-a_k V} on the box, unit mass by construction
};

/// Appendix-style localization of the equilibrium to the box of
/// half-width k: finds a_k with integral of e^{-a_k V} over the box equal
/// to 1 (bisection on the strictly monotone residual; tolerance 1e-12 on
/// the mass defect). Throws TruncationError when the box cannot hold unit
/// mass (|B| < 1) and ConfigError for non-positive k or tiny grids.
LocalizedWeight localize_weight(const MPotential& potential, double k, int n_cells,
                                GridKind grid_kind = GridKind::truncated_1d);

struct LocalizedInitial {
  double b_k = 0.0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;  // b_k * f0 restricted to the box
};

/// Conservative restriction of f0 to the sub-box of half-width k: selects
/// the cells inside, rescales by b_k = 1 / (mass inside). Requires the
/// sub-box to align with the parent lattice (same spacing, matching
/// edges); misalignment is a ConfigError.
LocalizedInitial localize_initial(const DensityField& f0, double k);

/// One rung of the localization ladder: localized equilibrium m_k (wrapped
/// as an Equilibrium with its own gamma_k), localized initial data, and
/// the measured sandwich ratios.
struct LocalizedProblem {
  double k = 0.0;
  double a_k = 0.0;
  double b_k = 0.0;
  Equilibrium eq;
  Weight weight;
  DensityField f0;
};

LocalizedProblem build_localized_problem(const MPotential& potential,
                                         const DensityField& f0_reference, double r,
                                         double k);

struct LadderRow {
  double k = 0.0;
  double a_k = 0.0;
  double b_k = 0.0;
  double ratio_min = 0.0;       // c_k
  double ratio_max = 0.0;       // C_k
  double l1_gap_to_next = 0.0;  // L1 distance to the next rung on B(0,R); 0 for the last
};

struct LadderStudy {
  std::vector<LadderRow> rows;
  double t_end = 0.0;        // horizon actually used
  double fitted_rate = 0.0;  // decay rate fitted on the top rung probe
  std::string csv() const;   // header k,a_k,b_k,c_k,C_k,L1_gap_to_next
};

struct LadderConfig {
  std::vector<double> ks;      // at least 3 rungs, increasing
  double compare_radius = 3.0; // R of the comparison window B(0,R)
  double t_end = 0.0;          // 0: one e-fold of the top rung, probed
  SolverConfig solver;
  int jobs = 1;
};

/// Runs every rung to the common horizon and compares consecutive
/// solutions on B(0,R). The reference field f0 must live on a grid whose
/// lattice all rungs align with.
LadderStudy localization_study(const MPotential& potential,
                               const DensityField& f0_reference, double r,
                               const LadderConfig& config);

}  // namespace ufd
