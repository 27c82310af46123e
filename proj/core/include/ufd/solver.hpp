#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ufd/functionals.hpp"
#include "ufd/weights.hpp"

namespace ufd {

struct SolverConfig {
  double t_end = 0.1;
  double cfl_safety = 0.4;      // in (0, 0.9]
  double record_every = 0.0;    // 0: auto (t_end / 200)
  std::optional<double> dt_max; // extra cap on top of the CFL bound
  double positivity_floor = 1e-14;
  int max_halvings = 20;        // abort-and-halve retries per step
};

/// phi_i = rho_i / f_i^{r+1}; the quantity whose gradient drives the flux.
std::vector<double> pressure(std::span<const double> f, const Weight& w, double r);

/// cfl_safety * h^2 / (2 * dim * max_i D_i) with the local diffusivity
/// D_i = r (r+1) rho_i / f_i^{r+1}.
double stable_dt(std::span<const double> f, const Weight& w, double r,
                 double cfl_safety, std::optional<double> dt_max = std::nullopt);

/// One conservative explicit update of size dt. Throws PositivityError if
/// any cell falls to or below `positivity_floor`.
void step_in_place(std::vector<double>& f, const Weight& w, double r, double dt,
                   double positivity_floor = 1e-14);

DensityField step(const DensityField& f, const Equilibrium& eq, const Weight& w,
                  double dt, double positivity_floor = 1e-14);

/// The semi-discrete system's own energy production rate,
///   r^2 * sum over faces of f_face * (Δ phi / h)^2 * face_volume,
/// which equals -dF/dt of the spatial discretization exactly (summation by
/// parts). Relates to the face-mean functional as
/// energy_decay_rate ~= gamma^{-2(r+1)} * dissipation, with O(h^2) mismatch.
double energy_decay_rate(std::span<const double> f, const Weight& w, double r);

struct RunRecord {
  std::vector<double> t;
  std::vector<double> free_energy;
  std::vector<double> gap;
  std::vector<double> dissipation;
  std::vector<double> chi2;
  std::vector<double> ratio_min;
  std::vector<double> ratio_max;
  std::vector<double> mass;
  std::vector<double> dt;

  // Whole-run monitors, updated every step.
  double max_mass_deviation = 0.0;  // max |mass - 1|
  double worst_ratio_min_drop = 0.0;   // most negative per-step change of c(t)
  double worst_ratio_max_rise = 0.0;   // largest per-step rise of C(t)
  long long steps = 0;
  int halvings = 0;
  bool aborted = false;
  std::string abort_reason;

  std::size_t size() const { return t.size(); }
  std::string csv() const;  // header t,F,gap,I,chi2,c,C,mass,dt plus rows
};

struct RunResult {
  RunRecord record;
  DensityField final_field;
};

/// March f0 to t_end with per-step CFL control, abort-and-halve positivity
/// retries, and diagnostics every `record_every` time units.
RunResult run(const DensityField& f0, const Equilibrium& eq, const Weight& w,
              const SolverConfig& config);

/// Two trajectories advanced with the shared step size
/// min(stable_dt(f), stable_dt(g)); records the L1 distance per step.
struct PairRecord {
  std::vector<double> t;
  std::vector<double> l1_distance;
  double max_l1_increase = 0.0;  // largest per-step increase (contraction breaks)
  long long steps = 0;
};

PairRecord run_synchronized_pair(const DensityField& f0, const DensityField& g0,
                                 const Equilibrium& eq, const Weight& w,
                                 const SolverConfig& config);

/// Least-squares slope of -log(gap) against t over the trailing `window`
/// fraction of recorded points with gap > floor. Throws NumericalError
/// with fewer than 10 usable points.
double fit_rate(const RunRecord& record, double window = 0.6, double floor = 1e-13);

/// Same fit on raw series (used by tests and the localization probe).
double fit_rate_series(std::span<const double> t, std::span<const double> gap,
                       double window = 0.6, double floor = 1e-13);

}  // namespace ufd
