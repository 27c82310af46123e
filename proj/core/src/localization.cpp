#include "ufd/localization.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ufd/csv.hpp"
#include "ufd/errors.hpp"
#include "ufd/poincare.hpp"

namespace ufd {

namespace {

// Normalizer of e^{-|x/lam|^alpha / alpha} over the line:
// 2 lam alpha^{1/alpha - 1} Gamma(1/alpha). Covers the quadratic case
// (alpha = 2, lam = sigma) where it reduces to sqrt(2 pi) sigma.
double line_normalizer(double alpha, double lam) {
  return 2.0 * lam * std::pow(alpha, 1.0 / alpha - 1.0) * std::tgamma(1.0 / alpha);
}

}  // namespace

MPotential m_potential(const PotentialSpec& rho_potential, double r) {
  if (!(r > 1.0)) throw ParameterError("the exponent r must exceed 1");
  MPotential out;
  switch (rho_potential.kind) {
    case PotentialSpec::Kind::uniform:
      throw ConfigError("the uniform weight has nothing to localize");
    case PotentialSpec::Kind::quadratic: {
      const double sigma_m = rho_potential.sigma * std::sqrt(r + 1.0);
      out.shape = PotentialSpec::quadratic(sigma_m);
      out.offset = std::log(line_normalizer(2.0, sigma_m));
      return out;
    }
    case PotentialSpec::Kind::power: {
      out.shape = PotentialSpec::power(rho_potential.alpha);
      out.shape.scale =
          rho_potential.scale * std::pow(r + 1.0, 1.0 / rho_potential.alpha);
      out.offset = std::log(line_normalizer(out.shape.alpha, out.shape.scale));
      return out;
    }
  }
  throw ConfigError("unknown potential kind");
}

LocalizedWeight localize_weight(const MPotential& potential, double k, int n_cells,
                                GridKind grid_kind) {
  if (grid_kind != GridKind::truncated_1d)
    throw ConfigError("localization ladders are one-dimensional");
  if (!(k > 0.0)) throw ConfigError("localization box half-width must be positive");
  if (!(potential.offset > 0.0))
    throw ConfigError(
        "localization needs a positive log normalizer (equilibrium too concentrated)");

  auto grid = Grid::truncated_1d(n_cells, k);
  if (grid->domain_volume() <= 1.0)
    throw TruncationError("box of volume " + format_double(grid->domain_volume()) +
                          " cannot hold unit mass");

  std::vector<double> shape(static_cast<std::size_t>(grid->n_cells()));
  for (int i = 0; i < grid->n_cells(); ++i)
    shape[static_cast<std::size_t>(i)] = potential.shape.value(grid->x(i) * grid->x(i));

  auto mass_at = [&](double a) {
    std::vector<double> vals(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i)
      vals[i] = std::exp(-a * (shape[i] + potential.offset));
    return grid->integrate(vals);
  };

  // mass_at is strictly decreasing (the exponent shape + offset is positive
  // everywhere), mass_at(0) = |B| > 1, mass_at(inf) = 0: unique root.
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (mass_at(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60)
      throw NumericalError("localization scaling exponent exceeds 2^60");
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    a = 0.5 * (lo + hi);
    const double defect = mass_at(a) - 1.0;
    if (std::abs(defect) <= 1e-13) break;
    (defect > 0.0 ? lo : hi) = a;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }

  LocalizedWeight out;
  out.a_k = a;
  out.grid = grid;
  out.m.resize(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i)
    out.m[i] = std::exp(-a * (shape[i] + potential.offset));
  return out;
}

namespace {

// Index of the reference cell sitting at the left edge of the sub-box of
// half-width k, plus the sub-box cell count; throws if edges misalign.
std::pair<int, int> aligned_window(const Grid& parent, double k) {
  if (parent.kind() != GridKind::truncated_1d)
    throw ConfigError("localization restriction needs a one-dimensional truncated grid");
  if (!(k > 0.0)) throw ConfigError("localization box half-width must be positive");
  const double h = parent.spacing();
  const double big = parent.half_width();
  if (k > big * (1.0 + 1e-12))
    throw ConfigError("localization box exceeds the reference domain");
  const double cells = 2.0 * k / h;
  const int nk = static_cast<int>(std::llround(cells));
  if (std::abs(cells - nk) > 1e-9)
    throw ConfigError("localization box is not a whole number of cells wide");
  const double off = (big - k) / h;
  const int i0 = static_cast<int>(std::llround(off));
  if (std::abs(off - i0) > 1e-9)
    throw ConfigError("localization box edges do not align with the reference lattice");
  return {i0, nk};
}

}  // namespace

LocalizedInitial localize_initial(const DensityField& f0, double k) {
  const Grid& parent = f0.grid();
  const auto [i0, nk] = aligned_window(parent, k);
  const auto values = f0.values();
  std::vector<double> inside(values.begin() + i0, values.begin() + i0 + nk);
  const double mass_inside = kahan_weighted_sum(inside, parent.cell_volume());
  if (!(mass_inside > 0.0))
    throw NumericalError("no mass inside the localization box");
  const double b_k = 1.0 / mass_inside;
  for (double& v : inside) v *= b_k;

  LocalizedInitial out;
  out.b_k = b_k;
  out.grid = Grid::truncated_1d(nk, k);
  out.values = std::move(inside);
  return out;
}

LocalizedProblem build_localized_problem(const MPotential& potential,
                                         const DensityField& f0_reference, double r,
                                         double k) {
  LocalizedInitial li = localize_initial(f0_reference, k);
  LocalizedWeight lw = localize_weight(potential, k, li.grid->n_per_axis());

  // The rung weight is recovered from the rung equilibrium: rho_k is the
  // normalized (r+1) power of m_k, so make_equilibrium reproduces m_k
  // exactly and the rung inherits every discrete identity.
  std::vector<double> rho(lw.m.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::pow(lw.m[i], r + 1.0);
  const double z = lw.grid->integrate(rho);
  for (double& v : rho) v /= z;

  Weight weight(lw.grid, std::move(rho), potential.shape);
  Equilibrium eq = make_equilibrium(weight, r);
  DensityField f0(eq, std::move(li.values));
  return LocalizedProblem{k, lw.a_k, li.b_k, std::move(eq), std::move(weight),
                          std::move(f0)};
}

std::string LadderStudy::csv() const {
  std::string out = "k,a_k,b_k,c_k,C_k,L1_gap_to_next\n";
  for (const LadderRow& row : rows) {
    const double cells[] = {row.k,         row.a_k,       row.b_k,
                            row.ratio_min, row.ratio_max, row.l1_gap_to_next};
    out += csv_line(cells);
    out += '\n';
  }
  return out;
}

LadderStudy localization_study(const MPotential& potential,
                               const DensityField& f0_reference, double r,
                               const LadderConfig& config) {
  if (config.ks.size() < 3)
    throw ConfigError("a localization ladder needs at least 3 rungs");
  for (std::size_t i = 1; i < config.ks.size(); ++i)
    if (!(config.ks[i] > config.ks[i - 1]))
      throw ConfigError("ladder half-widths must increase strictly");
  if (!(config.compare_radius > 0.0) ||
      config.compare_radius > config.ks.front() * (1.0 + 1e-12))
    throw ConfigError("comparison radius must lie inside the smallest rung");
  if (config.jobs < 1) throw ConfigError("jobs must be >= 1");

  std::vector<LocalizedProblem> rungs;
  rungs.reserve(config.ks.size());
  for (double k : config.ks)
    rungs.push_back(build_localized_problem(potential, f0_reference, r, k));

  LadderStudy study;
  study.t_end = config.t_end;
  if (!(study.t_end > 0.0)) {
    // One e-fold of the top rung's linearized decay rate
    // 2 r (r+1) gamma^{-(r+1)} lambda_1.
    const LocalizedProblem& top = rungs.back();
    const SpectralGapResult sg = spectral_gap(top.eq);
    const double rate = 2.0 * r * (r + 1.0) *
                        std::pow(top.eq.gamma(), -(r + 1.0)) * sg.lambda1;
    study.t_end = 1.0 / rate;
  }

  SolverConfig sc = config.solver;
  sc.t_end = study.t_end;
  std::vector<RunResult> results;
  results.reserve(rungs.size());
  for (const LocalizedProblem& rung : rungs) {
    RunResult res = run(rung.f0, rung.eq, rung.weight, sc);
    if (res.record.aborted)
      throw NumericalError("ladder rung k = " + format_double(rung.k) +
                           " aborted: " + res.record.abort_reason);
    results.push_back(std::move(res));
  }

  try {
    study.fitted_rate = fit_rate(results.back().record);
  } catch (const NumericalError&) {
    study.fitted_rate = 0.0;  // already at equilibrium: nothing to fit
  }

  const double h = f0_reference.grid().spacing();
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    LadderRow row;
    row.k = rungs[i].k;
    row.a_k = rungs[i].a_k;
    row.b_k = rungs[i].b_k;
    row.ratio_min = rungs[i].f0.ratio_min();
    row.ratio_max = rungs[i].f0.ratio_max();
    if (i + 1 < rungs.size()) {
      const Grid& ga = rungs[i].f0.grid();
      const auto fa = results[i].final_field.values();
      const auto fb = results[i + 1].final_field.values();
      const int shift = static_cast<int>(
          std::llround((rungs[i + 1].k - rungs[i].k) / h));
      std::vector<double> diff;
      diff.reserve(fa.size());
      for (int j = 0; j < ga.n_cells(); ++j)
        if (std::abs(ga.x(j)) <= config.compare_radius + 1e-12)
          diff.push_back(std::abs(fa[static_cast<std::size_t>(j)] -
                                  fb[static_cast<std::size_t>(j + shift)]));
      row.l1_gap_to_next = kahan_weighted_sum(diff, h);
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace ufd
