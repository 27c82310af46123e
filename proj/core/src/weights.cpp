#include "ufd/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ufd/csv.hpp"
#include "ufd/errors.hpp"

namespace ufd {

PotentialSpec PotentialSpec::uniform() { return {Kind::uniform, 0.0, 0.0}; }

PotentialSpec PotentialSpec::quadratic(double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("quadratic potential needs sigma > 0");
  return {Kind::quadratic, sigma, 0.0};
}

PotentialSpec PotentialSpec::power(double alpha) {
  if (!(alpha > 1.0) || !(alpha <= 2.0))
    throw ParameterError("power potential needs alpha in (1, 2]");
  return {Kind::power, 0.0, alpha};
}

double PotentialSpec::value(double radius_sq) const {
  switch (kind) {
    case Kind::uniform: return 0.0;
    case Kind::quadratic: return radius_sq / (2.0 * sigma * sigma);
    case Kind::power: return std::pow(std::sqrt(radius_sq) / scale, alpha) / alpha;
  }
  return 0.0;
}

std::string to_string(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::uniform: return "uniform";
    case PotentialSpec::Kind::quadratic: return "quadratic";
    case PotentialSpec::Kind::power: return "power";
  }
  return "?";
}

Weight::Weight(std::shared_ptr<const Grid> grid, std::vector<double> rho,
               PotentialSpec potential)
    : grid_(std::move(grid)), rho_(std::move(rho)), potential_(potential) {
  if (static_cast<int>(rho_.size()) != grid_->n_cells())
    throw DimensionError("weight density size does not match the grid");
}

Weight make_weight(std::shared_ptr<const Grid> grid, const PotentialSpec& spec) {
  if (spec.kind == PotentialSpec::Kind::uniform) {
    if (!grid->periodic())
      throw ConfigError("the uniform weight lives on the periodic unit domain");
  } else {
    if (grid->periodic())
      throw ConfigError("confining weights need a truncated grid");
    if (spec.kind == PotentialSpec::Kind::quadratic && !(spec.sigma > 0.0))
      throw ParameterError("quadratic potential needs sigma > 0");
    if (spec.kind == PotentialSpec::Kind::power &&
        (!(spec.alpha > 1.0) || !(spec.alpha <= 2.0)))
      throw ParameterError("power potential needs alpha in (1, 2]");
  }

  const int n = grid->n_cells();
  std::vector<double> rho(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double r2 = grid->x(i) * grid->x(i);
    if (grid->dim() == 2) r2 += grid->y(i) * grid->y(i);
    rho[static_cast<std::size_t>(i)] = std::exp(-spec.value(r2));
  }
  const double mass = grid->integrate(rho);
  for (double& v : rho) v /= mass;
  return Weight(grid, std::move(rho), spec);
}

Equilibrium::Equilibrium(std::shared_ptr<const Grid> grid, double r, double gamma,
                         std::vector<double> m)
    : grid_(std::move(grid)), r_(r), gamma_(gamma), m_(std::move(m)) {
  if (static_cast<int>(m_.size()) != grid_->n_cells())
    throw DimensionError("equilibrium density size does not match the grid");
  energy_floor_ = std::pow(gamma_, -(r_ + 1.0));
}

Equilibrium make_equilibrium(const Weight& weight, double r) {
  if (!(r > 1.0)) throw ParameterError("the exponent r must exceed 1");
  const auto rho = weight.rho();
  std::vector<double> m(rho.size());
  const double p = 1.0 / (r + 1.0);
  for (std::size_t i = 0; i < rho.size(); ++i) m[i] = std::pow(rho[i], p);
  const double z = weight.grid().integrate(m);
  const double gamma = 1.0 / z;
  for (double& v : m) v *= gamma;
  return Equilibrium(weight.grid_ptr(), r, gamma, std::move(m));
}

InitialSpec InitialSpec::cosine(double epsilon, int mode) {
  InitialSpec s;
  s.kind = Kind::cosine;
  s.epsilon = epsilon;
  s.mode = mode;
  return s;
}

InitialSpec InitialSpec::ratio_step(double u_lo, double u_hi) {
  InitialSpec s;
  s.kind = Kind::ratio_step;
  s.u_lo = u_lo;
  s.u_hi = u_hi;
  return s;
}

InitialSpec InitialSpec::tilt(int shift_cells, double clip_lo, double clip_hi) {
  InitialSpec s;
  s.kind = Kind::tilt;
  s.shift_cells = shift_cells;
  s.clip_lo = clip_lo;
  s.clip_hi = clip_hi;
  return s;
}

DensityField::DensityField(const Equilibrium& eq, std::vector<double> values)
    : grid_(eq.grid_ptr()), f_(std::move(values)) {
  if (static_cast<int>(f_.size()) != grid_->n_cells())
    throw DimensionError("density field size does not match the grid");
  for (std::size_t i = 0; i < f_.size(); ++i)
    if (!(f_[i] > 0.0))
      throw PositivityError("density is not positive in cell " + std::to_string(i));
  const double raw_mass = grid_->integrate(f_);
  if (!(raw_mass > 0.0) || !std::isfinite(raw_mass))
    throw PositivityError("density has no finite positive mass");
  for (double& v : f_) v /= raw_mass;
  mass_ = grid_->integrate(f_);
  const auto m = eq.m();
  ratio_min_ = f_[0] / m[0];
  ratio_max_ = ratio_min_;
  for (std::size_t i = 1; i < f_.size(); ++i) {
    const double u = f_[i] / m[i];
    ratio_min_ = std::min(ratio_min_, u);
    ratio_max_ = std::max(ratio_max_, u);
  }
}

double perturbation_mode(const Grid& grid, int cell, int mode) {
  const double pi = std::numbers::pi;
  if (grid.periodic()) return std::cos(2.0 * pi * mode * grid.x(cell));
  const double L = grid.half_width();
  const double gx = std::cos(mode * pi * (grid.x(cell) + L) / (2.0 * L));
  if (grid.dim() == 1) return gx;
  const double gy = std::cos(mode * pi * (grid.y(cell) + L) / (2.0 * L));
  return gx * gy;
}

DensityField make_initial(const Equilibrium& eq, const InitialSpec& spec) {
  const Grid& grid = eq.grid();
  const int n = grid.n_cells();
  std::vector<double> f(static_cast<std::size_t>(n));

  switch (spec.kind) {
    case InitialSpec::Kind::cosine: {
      if (spec.mode < 1) throw ParameterError("cosine initial data needs mode >= 1");
      for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] =
            eq.m(i) * (1.0 + spec.epsilon * perturbation_mode(grid, i, spec.mode));
      break;
    }
    case InitialSpec::Kind::ratio_step: {
      if (!(spec.u_lo > 0.0) || !(spec.u_hi > 0.0))
        throw ParameterError("step ratios must be positive");
      const double mid = grid.periodic() ? 0.5 : 0.0;
      for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] =
            eq.m(i) * (grid.x(i) < mid ? spec.u_lo : spec.u_hi);
      break;
    }
    case InitialSpec::Kind::tilt: {
      if (!(spec.clip_lo > 0.0) || !(spec.clip_lo < spec.clip_hi))
        throw ParameterError("tilt clip range must satisfy 0 < lo < hi");
      const int nx = grid.n_per_axis();
      const int rows = n / nx;
      for (int row = 0; row < rows; ++row) {
        for (int ix = 0; ix < nx; ++ix) {
          int jx = ix - spec.shift_cells;
          if (grid.periodic())
            jx = ((jx % nx) + nx) % nx;
          else
            jx = std::clamp(jx, 0, nx - 1);
          const int i = row * nx + ix;
          const int j = row * nx + jx;
          const double u = std::clamp(eq.m(j) / eq.m(i), spec.clip_lo, spec.clip_hi);
          f[static_cast<std::size_t>(i)] = eq.m(i) * u;
        }
      }
      break;
    }
  }
  return DensityField(eq, std::move(f));
}

void write_profile(const std::string& path, const Grid& grid,
                   std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.n_cells())
    throw DimensionError("profile size does not match the grid");
  std::string out;
  out.reserve(values.size() * 48);
  for (int i = 0; i < grid.n_cells(); ++i) {
    out += format_double(grid.x(i));
    if (grid.dim() == 2) {
      out += ' ';
      out += format_double(grid.y(i));
    }
    out += ' ';
    out += format_double(values[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace ufd
