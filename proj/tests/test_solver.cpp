#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ufd/errors.hpp"
#include "ufd/functionals.hpp"
#include "ufd/solver.hpp"
#include "ufd/weights.hpp"

using namespace ufd;

namespace {

constexpr double pi = std::numbers::pi;

struct Lab {
  Weight weight;
  Equilibrium eq;
};

Lab uniform_lab(int n, double r) {
  auto g = Grid::periodic_1d(n);
  Weight w = make_weight(g, PotentialSpec::uniform());
  Equilibrium eq = make_equilibrium(w, r);
  return {std::move(w), std::move(eq)};
}

Lab gaussian_lab(int n, double L, double r) {
  auto g = Grid::truncated_1d(n, L);
  Weight w = make_weight(g, PotentialSpec::quadratic(1.0));
  Equilibrium eq = make_equilibrium(w, r);
  return {std::move(w), std::move(eq)};
}

double circulant_lambda1(int n) {
  const double s = std::sin(pi / n);
  return 4.0 * n * n * s * s;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("pressure of the half-and-half step is the hand value") {
  Lab lab = uniform_lab(64, 2.0);
  DensityField f = make_initial(lab.eq, InitialSpec::ratio_step(1.5, 0.5));
  const std::vector<double> phi = pressure(f.values(), lab.weight, 2.0);
  // 1.5^{-3} and 0.5^{-3} (the step has unit mass, no renormalization)
  CHECK(phi.front() == doctest::Approx(8.0 / 27.0).epsilon(1e-13));
  CHECK(phi.back() == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("stable step size has the closed form on the flat equilibrium") {
  Lab lab = uniform_lab(100, 2.0);
  DensityField f = make_initial(lab.eq, InitialSpec::cosine(0.0));
  // D = r (r+1) rho / f^{r+1} = 6 in every cell
  const double h = 0.01;
  CHECK(stable_dt(f.values(), lab.weight, 2.0, 0.4) ==
        doctest::Approx(0.4 * h * h / 12.0).epsilon(1e-12));
  CHECK(stable_dt(f.values(), lab.weight, 2.0, 0.4, 1e-7) ==
        doctest::Approx(1e-7).epsilon(1e-15));
  CHECK_THROWS_AS(stable_dt(f.values(), lab.weight, 2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(stable_dt(f.values(), lab.weight, 2.0, 0.95), ParameterError);
}

TEST_CASE("one explicit update matches a hand-computed four-cell flux balance") {
  Lab lab = uniform_lab(4, 2.0);
  // alternating ratios 1.2 / 0.8: every face carries the same flux size
  std::vector<double> f = {1.2, 0.8, 1.2, 0.8};
  const double dt = 1e-5;
  const double k = 2.0 * dt / (0.25 * 0.25);
  const double dphi = 1.0 / (0.8 * 0.8 * 0.8) - 1.0 / (1.2 * 1.2 * 1.2);
  std::vector<double> expected = {1.2 - 2.0 * k * dphi, 0.8 + 2.0 * k * dphi,
                                  1.2 - 2.0 * k * dphi, 0.8 + 2.0 * k * dphi};
  step_in_place(f, lab.weight, 2.0, dt);
  for (int i = 0; i < 4; ++i)
    CHECK(f[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-13));
}

TEST_CASE("a step conserves mass to rounding") {
  Lab lab = gaussian_lab(400, 8.0, 2.0);
  DensityField f = make_initial(lab.eq, InitialSpec::cosine(0.3));
  std::vector<double> values(f.values().begin(), f.values().end());
  const double before = lab.eq.grid().integrate(values);
  const double dt = stable_dt(values, lab.weight, 2.0, 0.4);
  for (int s = 0; s < 50; ++s) step_in_place(values, lab.weight, 2.0, dt);
  CHECK(lab.eq.grid().integrate(values) == doctest::Approx(before).epsilon(1e-13));
}

TEST_CASE("the equilibrium is a discrete fixed point") {
  Lab lab = gaussian_lab(300, 7.0, 2.0);
  DensityField f = make_initial(lab.eq, InitialSpec::cosine(0.0));
  std::vector<double> values(f.values().begin(), f.values().end());
  const double dt = stable_dt(values, lab.weight, 2.0, 0.4);
  for (int s = 0; s < 100; ++s) step_in_place(values, lab.weight, 2.0, dt);
  for (int i = 0; i < 300; ++i)
    CHECK(std::abs(values[static_cast<std::size_t>(i)] / lab.eq.m(i) - 1.0) <= 1e-13);
}

TEST_CASE("free energy decreases at the semi-discrete rate") {
  Lab lab = gaussian_lab(200, 7.0, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.3));
  std::vector<double> f(f0.values().begin(), f0.values().end());
  const double rate = energy_decay_rate(f, lab.weight, 2.0);
  const double dt_ref = stable_dt(f, lab.weight, 2.0, 0.4);

  auto df_over_dt = [&](double dt) {
    std::vector<double> g = f;
    step_in_place(g, lab.weight, 2.0, dt);
    DensityField before(lab.eq, std::vector<double>(f));
    DensityField after(lab.eq, std::move(g));
    return (free_energy(before, lab.eq, lab.weight) -
            free_energy(after, lab.eq, lab.weight)) / dt;
  };

  // First-order one-sided difference: the defect against the exact
  // semi-discrete rate shrinks linearly in dt.
  const double err64 = std::abs(df_over_dt(dt_ref / 64.0) - rate) / rate;
  const double err128 = std::abs(df_over_dt(dt_ref / 128.0) - rate) / rate;
  CHECK(err64 < 1e-3);
  CHECK(err64 / err128 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("flux-form decay rate and face-mean dissipation agree") {
  SUBCASE("exactly, on the flat weight") {
    Lab lab = uniform_lab(128, 2.0);
    DensityField f = make_initial(lab.eq, InitialSpec::cosine(0.25));
    const double flux_form = energy_decay_rate(f.values(), lab.weight, 2.0);
    CHECK(flux_form == doctest::Approx(dissipation(f, lab.eq, lab.weight)).epsilon(1e-12));
  }
  SUBCASE("to second order, on the gaussian weight") {
    auto mismatch = [](int n) {
      Lab lab = gaussian_lab(n, 7.0, 2.0);
      DensityField f = make_initial(lab.eq, InitialSpec::cosine(0.25));
      const double gamma_sq = std::pow(lab.eq.gamma(), -2.0 * (2.0 + 1.0));
      return std::abs(energy_decay_rate(f.values(), lab.weight, 2.0) /
                          (gamma_sq * dissipation(f, lab.eq, lab.weight)) -
                      1.0);
    };
    const double coarse = mismatch(200);
    const double fine = mismatch(400);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.3));
  }
}

TEST_CASE("a full run decays monotonically and contracts the ratios") {
  Lab lab = gaussian_lab(300, 7.0, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.3));
  SolverConfig config;
  config.t_end = 0.02;
  RunResult res = run(f0, lab.eq, lab.weight, config);
  const RunRecord& rec = res.record;

  CHECK(rec.size() >= 100);
  CHECK(!rec.aborted);
  CHECK(rec.t.front() == 0.0);
  CHECK(rec.t.back() == doctest::Approx(0.02).epsilon(1e-9));
  for (std::size_t i = 1; i < rec.size(); ++i) {
    CHECK(rec.gap[i] <= rec.gap[i - 1] + 1e-14);
    CHECK(rec.free_energy[i] <= rec.free_energy[i - 1] + 1e-14);
  }
  CHECK(rec.max_mass_deviation <= 1e-13);
  CHECK(rec.worst_ratio_min_drop >= -1e-12);
  CHECK(rec.worst_ratio_max_rise <= 1e-12);
  CHECK(rec.gap.back() < rec.gap.front());
  // sandwich tightens toward 1
  CHECK(res.final_field.ratio_min() > f0.ratio_min());
  CHECK(res.final_field.ratio_max() < f0.ratio_max());
}

TEST_CASE("fitted decay rate matches the linearized spectral prediction") {
  // Small data on the flat weight decays like e^{-2 r (r+1) lambda_1 t}
  // with the discrete circulant lambda_1.
  Lab lab = uniform_lab(128, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.01));
  SolverConfig config;
  config.t_end = 0.01;
  RunResult res = run(f0, lab.eq, lab.weight, config);
  const double predicted = 12.0 * circulant_lambda1(128);
  CHECK(fit_rate(res.record) == doctest::Approx(predicted).epsilon(0.01));
}

TEST_CASE("rate fit recovers synthetic slopes") {
  std::vector<double> t, clean, offset;
  for (int i = 0; i <= 200; ++i) {
    const double x = 2.0 * i / 200.0;
    t.push_back(x);
    clean.push_back(std::exp(-5.0 * x));
    offset.push_back(2.0 * std::exp(-3.0 * x) + 1e-15);
  }
  CHECK(fit_rate_series(t, clean) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(fit_rate_series(t, offset) == doctest::Approx(3.0).epsilon(1e-3));

  std::vector<double> t_few(t.begin(), t.begin() + 5);
  std::vector<double> g_few(clean.begin(), clean.begin() + 5);
  CHECK_THROWS_AS(fit_rate_series(t_few, g_few), NumericalError);

  std::vector<double> below(t.size(), 1e-14);
  CHECK_THROWS_AS(fit_rate_series(t, below), NumericalError);
  CHECK_THROWS_AS(fit_rate_series(t, clean, 0.0), ParameterError);
  CHECK_THROWS_AS(fit_rate_series(t, clean, 1.5), ParameterError);
}

TEST_CASE("synchronized pair contracts in L1") {
  Lab lab = gaussian_lab(200, 6.0, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.3));
  DensityField g0 = make_initial(lab.eq, InitialSpec::cosine(-0.2, 2));
  SolverConfig config;
  config.t_end = 0.01;
  PairRecord rec = run_synchronized_pair(f0, g0, lab.eq, lab.weight, config);
  CHECK(rec.steps >= 10);
  CHECK(rec.l1_distance.back() < rec.l1_distance.front());
  CHECK(rec.max_l1_increase <= 1e-12);
}

TEST_CASE("positivity loss aborts after the configured halvings") {
  Lab lab = gaussian_lab(200, 8.0, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.3));
  SolverConfig config;
  config.t_end = 0.01;
  // a floor above the tail values can never be satisfied, however small dt
  config.positivity_floor = 1e-3;
  config.max_halvings = 4;
  RunResult res = run(f0, lab.eq, lab.weight, config);
  CHECK(res.record.aborted);
  CHECK(res.record.halvings == 4);
  CHECK(!res.record.abort_reason.empty());
  CHECK(res.record.steps == 0);

  std::vector<double> values(f0.values().begin(), f0.values().end());
  CHECK_THROWS_AS(step_in_place(values, lab.weight, 2.0, 1.0), PositivityError);
}

TEST_CASE("run validates its configuration") {
  Lab lab = uniform_lab(16, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.1));
  SolverConfig config;
  config.t_end = 0.0;
  CHECK_THROWS_AS(run(f0, lab.eq, lab.weight, config), ParameterError);
  config.t_end = 0.1;
  config.cfl_safety = 0.95;
  CHECK_THROWS_AS(run(f0, lab.eq, lab.weight, config), ParameterError);
  config.cfl_safety = 0.4;
  config.record_every = -1.0;
  CHECK_THROWS_AS(run(f0, lab.eq, lab.weight, config), ParameterError);
  config.record_every = 0.0;
  config.dt_max = 0.0;
  CHECK_THROWS_AS(run(f0, lab.eq, lab.weight, config), ParameterError);
  config.dt_max.reset();
  config.max_halvings = -1;
  CHECK_THROWS_AS(run(f0, lab.eq, lab.weight, config), ParameterError);
}

TEST_CASE("record cadence and csv serialization") {
  Lab lab = uniform_lab(64, 2.0);
  DensityField f0 = make_initial(lab.eq, InitialSpec::cosine(0.2));
  SolverConfig config;
  config.t_end = 0.002;
  config.record_every = 0.0002;
  RunResult res = run(f0, lab.eq, lab.weight, config);
  CHECK(res.record.size() >= 10);
  CHECK(res.record.size() <= 13);

  const std::string csv = res.record.csv();
  CHECK(csv.rfind("t,F,gap,I,chi2,c,C,mass,dt\n", 0) == 0);
  const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == res.record.size() + 1);
}

TEST_CASE("two-dimensional stepping conserves mass and decays") {
  auto g = Grid::tensor_2d(24, 8.0);
  Weight w = make_weight(g, PotentialSpec::quadratic(1.0));
  Equilibrium eq = make_equilibrium(w, 2.0);
  DensityField f0 = make_initial(eq, InitialSpec::cosine(0.2));
  SolverConfig config;
  config.t_end = 0.01;
  RunResult res = run(f0, eq, w, config);
  CHECK(!res.record.aborted);
  CHECK(res.record.max_mass_deviation <= 1e-13);
  CHECK(res.record.gap.back() < res.record.gap.front());
  CHECK(res.record.worst_ratio_min_drop >= -1e-12);
}

TEST_SUITE_END();
