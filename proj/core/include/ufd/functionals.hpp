#pragma once

#include <optional>
#include <string>

#include "ufd/weights.hpp"

namespace ufd {

/// F[f] = integral of rho / f^r.
double free_energy(const DensityField& f, const Equilibrium& eq, const Weight& w);

/// F[f] - F[m], using the exact identity F[m] = gamma^{-(r+1)} instead of
/// a second quadrature. Non-negative up to rounding for unit-mass f.
double energy_gap(const DensityField& f, const Equilibrium& eq, const Weight& w);

/// Weighted chi-square distance: integral of (f/m - 1)^2 m.
double chi2_distance(const DensityField& f, const Equilibrium& eq);

/// Face-sum dissipation functional
///   r^2 * sum over faces of u_face * (Δ(u^{-(r+1)})/h)^2 * m_face * face_volume,
/// with arithmetic face means of u = f/m and m. This is the quantity the
/// entropy bound gap <= K * I controls exactly at the discrete level. The
/// physical energy decay rate of the flow is gamma^{-2(r+1)} times this;
/// see solver.hpp (energy_decay_rate) for the flux-form twin.
double dissipation(const DensityField& f, const Equilibrium& eq, const Weight& w);

struct LemmaConstants {
  double k1;  // r(r+1) / (2 gamma^{r+1}) * C^{-(r+2)}
  double k2;  // r(r+1) / (2 gamma^{r+1}) * c^{-(r+2)}
};

/// Sandwich constants for k1 * chi2 <= gap <= k2 * chi2 on the class
/// c m <= f <= C m. Requires 0 < c <= 1 <= C (tolerance 1e-9 for the
/// rounding of measured ratios; values are clamped to the unit anchor).
LemmaConstants lemma_constants(double r, double gamma, double c, double C);

/// K = C_P * C^{2r+3} / (2 r (r+1) gamma^{r+1} c^{r+2}); the decay bound
/// is gap <= K * I and gap(t) <= gap(0) e^{-t/K}.
double decay_constant(double r, double gamma, double c, double C, double poincare_const);

/// One row of diagnostics for a field: functional values, measured
/// ratios, and the constants they imply.
struct FunctionalReport {
  double free_energy = 0.0;
  double gap = 0.0;
  double dissipation = 0.0;
  double chi2 = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double decay_K = 0.0;  // 0 when no Poincare constant was supplied

  /// CSV row in column order F,gap,I,chi2,c,C,k1,k2,K.
  std::string csv_row() const;
  static std::string csv_header();
};

FunctionalReport evaluate(const DensityField& f, const Equilibrium& eq, const Weight& w,
                          std::optional<double> poincare_const = std::nullopt);

/// Slack accounting for the three discrete inequalities behind the decay
/// theorem. Each slack is (bound - value); the checks pass when slack
/// >= -1e-10 * max(1, gap) (rounding allowance only; the inequalities are
/// exact in exact arithmetic).
struct BoundsReport {
  FunctionalReport report;
  double slack_sandwich_lower = 0.0;  // gap - k1*chi2
  double slack_sandwich_upper = 0.0;  // k2*chi2 - gap
  double slack_energy = 0.0;          // K*I - gap (only with a Poincare constant)
  double slack_gradient = 0.0;        // C^{2r+3}/(r(r+1))^2 * I - Dirichlet_m(u)
  /// Worst per-face slack of (C^{2r+3}/(r+1)^2) u_face (Δ u^{-(r+1)})^2 - (Δu)^2,
  /// relative to the face's own scale. Faces whose jump is pure rounding
  /// residue (both sides below 1e-24 u_face^2) count as exactly satisfied.
  double worst_face_slack = 0.0;
  int n_faces_failed = 0;
  bool sandwich_ok = false;
  bool energy_ok = false;    // true (vacuously) when no Poincare constant given
  bool gradient_ok = false;
  bool all_ok() const { return sandwich_ok && energy_ok && gradient_ok; }
};

BoundsReport verify_bounds(const DensityField& f, const Equilibrium& eq, const Weight& w,
                           std::optional<double> poincare_const = std::nullopt);

/// Discrete Dirichlet form sum over faces of (Δg/h)^2 m_face face_volume.
double dirichlet_form(std::span<const double> g, const Equilibrium& eq);

}  // namespace ufd
