#include "ufd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ufd/csv.hpp"
#include "ufd/errors.hpp"

namespace ufd {

namespace {

void require_field(std::span<const double> f, const Grid& grid, const char* who) {
  if (static_cast<int>(f.size()) != grid.n_cells())
    throw DimensionError(std::string(who) + ": field size does not match the grid");
}

void validate(const SolverConfig& config) {
  if (!(config.t_end > 0.0)) throw ParameterError("t_end must be positive");
  if (!(config.cfl_safety > 0.0) || !(config.cfl_safety <= 0.9))
    throw ParameterError("cfl_safety must lie in (0, 0.9]");
  if (config.record_every < 0.0) throw ParameterError("record_every must be >= 0");
  if (config.dt_max && !(*config.dt_max > 0.0))
    throw ParameterError("dt_max must be positive");
  if (config.positivity_floor < 0.0)
    throw ParameterError("positivity_floor must be >= 0");
  if (config.max_halvings < 0) throw ParameterError("max_halvings must be >= 0");
}

}  // namespace

std::vector<double> pressure(std::span<const double> f, const Weight& w, double r) {
  require_field(f, w.grid(), "pressure");
  if (!(r > 1.0)) throw ParameterError("the exponent r must exceed 1");
  const auto rho = w.rho();
  std::vector<double> phi(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    phi[i] = rho[i] * std::pow(f[i], -(r + 1.0));
  return phi;
}

double stable_dt(std::span<const double> f, const Weight& w, double r,
                 double cfl_safety, std::optional<double> dt_max) {
  require_field(f, w.grid(), "stable_dt");
  if (!(cfl_safety > 0.0) || !(cfl_safety <= 0.9))
    throw ParameterError("cfl_safety must lie in (0, 0.9]");
  const auto rho = w.rho();
  double max_d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = rho[i] * std::pow(f[i], -(r + 1.0));
    max_d = std::max(max_d, d);
  }
  max_d *= r * (r + 1.0);
  if (!(max_d > 0.0) || !std::isfinite(max_d))
    throw NumericalError("stable_dt: diffusivity is not finite and positive");
  const double h = w.grid().spacing();
  double dt = cfl_safety * h * h / (2.0 * w.grid().dim() * max_d);
  if (dt_max) dt = std::min(dt, *dt_max);
  return dt;
}

void step_in_place(std::vector<double>& f, const Weight& w, double r, double dt,
                   double positivity_floor) {
  require_field(f, w.grid(), "step");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const Grid& grid = w.grid();
  const std::vector<double> phi = pressure(f, w, r);
  const double h = grid.spacing();
  const double k = r * dt / (h * h);  // r*dt/h for the divergence, /h for the gradient

  std::vector<double> delta(f.size(), 0.0);
  for (const Face& face : grid.faces()) {
    const auto a = static_cast<std::size_t>(face.a);
    const auto b = static_cast<std::size_t>(face.b);
    const double flux = 0.5 * (f[a] + f[b]) * (phi[b] - phi[a]);
    delta[a] -= k * flux;
    delta[b] += k * flux;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f[i] + delta[i];
    if (!(v > positivity_floor))
      throw PositivityError("density fell to the positivity floor in cell " +
                            std::to_string(i));
    f[i] = v;
  }
}

DensityField step(const DensityField& f, const Equilibrium& eq, const Weight& w,
                  double dt, double positivity_floor) {
  std::vector<double> values(f.values().begin(), f.values().end());
  step_in_place(values, w, eq.r(), dt, positivity_floor);
  return DensityField(eq, std::move(values));
}

double energy_decay_rate(std::span<const double> f, const Weight& w, double r) {
  require_field(f, w.grid(), "energy_decay_rate");
  const Grid& grid = w.grid();
  const std::vector<double> phi = pressure(f, w, r);
  const double h = grid.spacing();
  const double scale = grid.face_volume() / (h * h);
  double sum = 0.0, carry = 0.0;
  for (const Face& face : grid.faces()) {
    const auto a = static_cast<std::size_t>(face.a);
    const auto b = static_cast<std::size_t>(face.b);
    const double dphi = phi[b] - phi[a];
    const double y = 0.5 * (f[a] + f[b]) * dphi * dphi * scale - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return r * r * sum;
}

std::string RunRecord::csv() const {
  std::string out = "t,F,gap,I,chi2,c,C,mass,dt\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double cells[] = {t[i],    free_energy[i], gap[i],  dissipation[i], chi2[i],
                            ratio_min[i], ratio_max[i],   mass[i], dt[i]};
    out += csv_line(cells);
    out += '\n';
  }
  return out;
}

namespace {

struct StepMonitors {
  double prev_ratio_min = 0.0;
  double prev_ratio_max = 0.0;
  bool has_prev = false;
};

void record_row(RunRecord& rec, const Equilibrium& eq, const Weight& w, double t,
                double raw_mass, double dt_used, const std::vector<double>& f) {
  DensityField field(eq, std::vector<double>(f));
  const FunctionalReport rep = evaluate(field, eq, w);
  rec.t.push_back(t);
  rec.free_energy.push_back(rep.free_energy);
  rec.gap.push_back(rep.gap);
  rec.dissipation.push_back(rep.dissipation);
  rec.chi2.push_back(rep.chi2);
  rec.ratio_min.push_back(rep.ratio_min);
  rec.ratio_max.push_back(rep.ratio_max);
  rec.mass.push_back(raw_mass);
  rec.dt.push_back(dt_used);
}

}  // namespace

RunResult run(const DensityField& f0, const Equilibrium& eq, const Weight& w,
              const SolverConfig& config) {
  validate(config);
  if (&f0.grid() != &eq.grid() || &eq.grid() != &w.grid())
    throw DimensionError("run: field, equilibrium and weight must share a grid");

  const Grid& grid = eq.grid();
  const double r = eq.r();
  std::vector<double> f(f0.values().begin(), f0.values().end());
  const auto m = eq.m();

  RunRecord rec;
  const double record_every =
      config.record_every > 0.0 ? config.record_every : config.t_end / 200.0;
  double t = 0.0;
  double next_record = record_every;
  record_row(rec, eq, w, 0.0, grid.integrate(f), 0.0, f);

  StepMonitors mon;
  mon.prev_ratio_min = f0.ratio_min();
  mon.prev_ratio_max = f0.ratio_max();
  mon.has_prev = true;

  const double t_stop = config.t_end * (1.0 - 1e-12);
  while (t < t_stop) {
    double dt = stable_dt(f, w, r, config.cfl_safety, config.dt_max);
    dt = std::min(dt, config.t_end - t);

    bool accepted = false;
    int halvings_this_step = 0;
    std::vector<double> trial;
    while (!accepted) {
      trial = f;
      try {
        step_in_place(trial, w, r, dt, config.positivity_floor);
        accepted = true;
      } catch (const PositivityError& err) {
        if (halvings_this_step >= config.max_halvings) {
          rec.aborted = true;
          rec.abort_reason = err.what();
          break;
        }
        dt *= 0.5;
        ++halvings_this_step;
        ++rec.halvings;
      }
    }
    if (!accepted) break;

    f = std::move(trial);
    t += dt;
    ++rec.steps;

    const double mass_now = grid.integrate(f);
    rec.max_mass_deviation = std::max(rec.max_mass_deviation, std::abs(mass_now - 1.0));
    double rmin = f[0] / m[0], rmax = rmin;
    for (std::size_t i = 1; i < f.size(); ++i) {
      const double u = f[i] / m[i];
      rmin = std::min(rmin, u);
      rmax = std::max(rmax, u);
    }
    rec.worst_ratio_min_drop = std::min(rec.worst_ratio_min_drop, rmin - mon.prev_ratio_min);
    rec.worst_ratio_max_rise = std::max(rec.worst_ratio_max_rise, rmax - mon.prev_ratio_max);
    mon.prev_ratio_min = rmin;
    mon.prev_ratio_max = rmax;

    if (t >= next_record - 1e-12 * config.t_end || t >= t_stop) {
      record_row(rec, eq, w, t, mass_now, dt, f);
      while (next_record <= t + 1e-12 * config.t_end) next_record += record_every;
    }
  }

  return RunResult{std::move(rec), DensityField(eq, std::move(f))};
}

PairRecord run_synchronized_pair(const DensityField& f0, const DensityField& g0,
                                 const Equilibrium& eq, const Weight& w,
                                 const SolverConfig& config) {
  validate(config);
  if (&f0.grid() != &g0.grid() || &f0.grid() != &eq.grid())
    throw DimensionError("paired run: fields must share the grid");

  const Grid& grid = eq.grid();
  const double r = eq.r();
  std::vector<double> f(f0.values().begin(), f0.values().end());
  std::vector<double> g(g0.values().begin(), g0.values().end());

  auto l1 = [&grid](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
    return grid.integrate(diff);
  };

  PairRecord rec;
  double t = 0.0;
  rec.t.push_back(0.0);
  rec.l1_distance.push_back(l1(f, g));

  const double t_stop = config.t_end * (1.0 - 1e-12);
  while (t < t_stop) {
    double dt = std::min(stable_dt(f, w, r, config.cfl_safety, config.dt_max),
                         stable_dt(g, w, r, config.cfl_safety, config.dt_max));
    dt = std::min(dt, config.t_end - t);

    int halvings = 0;
    while (true) {
      std::vector<double> ft = f, gt = g;
      try {
        step_in_place(ft, w, r, dt, config.positivity_floor);
        step_in_place(gt, w, r, dt, config.positivity_floor);
        f = std::move(ft);
        g = std::move(gt);
        break;
      } catch (const PositivityError&) {
        if (halvings >= config.max_halvings)
          throw NumericalError("paired run: positivity could not be restored by halving");
        dt *= 0.5;
        ++halvings;
      }
    }

    t += dt;
    ++rec.steps;
    const double dist = l1(f, g);
    rec.max_l1_increase = std::max(rec.max_l1_increase, dist - rec.l1_distance.back());
    rec.t.push_back(t);
    rec.l1_distance.push_back(dist);
  }
  return rec;
}

double fit_rate_series(std::span<const double> t, std::span<const double> gap,
                       double window, double floor) {
  if (t.size() != gap.size())
    throw DimensionError("fit_rate: time and gap series differ in length");
  if (!(window > 0.0) || !(window <= 1.0))
    throw ParameterError("fit window must lie in (0, 1]");
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (gap[i] > floor) {
      ts.push_back(t[i]);
      ys.push_back(-std::log(gap[i]));
    }
  if (ts.size() < 10)
    throw NumericalError("rate fit needs at least 10 points above the gap floor");
  const double t_lo = ts.back() - window * (ts.back() - ts.front());
  std::size_t first = 0;
  while (first < ts.size() && ts[first] < t_lo - 1e-15) ++first;
  const std::size_t n = ts.size() - first;
  if (n < 10)
    throw NumericalError("rate fit window holds fewer than 10 points");

  double mt = 0.0, my = 0.0;
  for (std::size_t i = first; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = first; i < ts.size(); ++i) {
    num += (ts[i] - mt) * (ys[i] - my);
    den += (ts[i] - mt) * (ts[i] - mt);
  }
  if (!(den > 0.0)) throw NumericalError("rate fit window has no time spread");
  return num / den;
}

double fit_rate(const RunRecord& record, double window, double floor) {
  return fit_rate_series(record.t, record.gap, window, floor);
}

}  // namespace ufd
