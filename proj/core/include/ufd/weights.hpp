#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ufd/grid.hpp"

namespace ufd {

/// Shape of the confining potential behind a weight density rho ~ e^{-V}.
/// `uniform` is the flat density on the periodic unit domain; `quadratic`
/// is V = |x|^2 / (2 sigma^2); `power` is V = |x / scale|^alpha / alpha
/// with alpha in (1, 2]. The weight families use scale = 1; the length
/// rescale exists because the equilibrium of a power weight is again a
/// power shape, stretched by (r+1)^{1/alpha}.
struct PotentialSpec {
  enum class Kind { uniform, quadratic, power };

  Kind kind = Kind::uniform;
  double sigma = 1.0;
  double alpha = 2.0;
  double scale = 1.0;

  static PotentialSpec uniform();
  static PotentialSpec quadratic(double sigma);
  static PotentialSpec power(double alpha);

  /// Potential value at squared radius |x|^2, with min 0 at the origin.
  double value(double radius_sq) const;
};

std::string to_string(PotentialSpec::Kind kind);

/// A probability density rho on a grid, normalized so the discrete
/// integral is exactly the computed one (integrate(rho) == 1 to rounding).
class Weight {
public:
  Weight(std::shared_ptr<const Grid> grid, std::vector<double> rho,
         PotentialSpec potential);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  std::span<const double> rho() const { return rho_; }
  double rho(int cell) const { return rho_[static_cast<std::size_t>(cell)]; }
  const PotentialSpec& potential() const { return potential_; }

private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> rho_;
  PotentialSpec potential_;
};

Weight make_weight(std::shared_ptr<const Grid> grid, const PotentialSpec& spec);

/// The stationary density m = gamma rho^{1/(r+1)} together with the
/// exponent r and the normalization gamma = 1 / integrate(rho^{1/(r+1)}).
/// By construction rho_i / m_i^{r+1} is the same constant gamma^{-(r+1)}
/// in every cell, which is what makes m a discrete fixed point of the
/// flow and the energy identity F[m] = gamma^{-(r+1)} exact.
class Equilibrium {
public:
  Equilibrium(std::shared_ptr<const Grid> grid, double r, double gamma,
              std::vector<double> m);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  double r() const { return r_; }
  double gamma() const { return gamma_; }
  std::span<const double> m() const { return m_; }
  double m(int cell) const { return m_[static_cast<std::size_t>(cell)]; }
  /// gamma^{-(r+1)}; equals the free energy of m itself.
  double energy_floor() const { return energy_floor_; }

private:
  std::shared_ptr<const Grid> grid_;
  double r_;
  double gamma_;
  double energy_floor_;
  std::vector<double> m_;
};

Equilibrium make_equilibrium(const Weight& weight, double r);

/// How to build initial data. All constructors produce f = m * u from a
/// ratio profile u, renormalize f to unit mass, and then measure the
/// sandwich constants from the final values.
struct InitialSpec {
  enum class Kind { cosine, ratio_step, tilt };

  Kind kind = Kind::cosine;

  // cosine: u = 1 + epsilon * (product over axes of) cos-mode `mode`.
  double epsilon = 0.3;
  int mode = 1;

  // ratio_step: u = u_lo on the left half of the x-axis, u_hi on the right.
  double u_lo = 1.5;
  double u_hi = 0.5;

  // tilt: m shifted by `shift_cells` cells along x, clipped so the ratio
  // stays inside [clip_lo, clip_hi].
  int shift_cells = 1;
  double clip_lo = 0.2;
  double clip_hi = 5.0;

  static InitialSpec cosine(double epsilon, int mode = 1);
  static InitialSpec ratio_step(double u_lo, double u_hi);
  static InitialSpec tilt(int shift_cells, double clip_lo = 0.2, double clip_hi = 5.0);
};

/// A positive density with unit discrete mass plus its measured sandwich
/// ratios c = min f/m and C = max f/m.
class DensityField {
public:
  /// Normalizes `values` to unit mass and measures the ratios against
  /// `eq`. Throws PositivityError if any value is <= 0.
  DensityField(const Equilibrium& eq, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  std::span<const double> values() const { return f_; }
  double value(int cell) const { return f_[static_cast<std::size_t>(cell)]; }
  double ratio_min() const { return ratio_min_; }
  double ratio_max() const { return ratio_max_; }
  double mass() const { return mass_; }

private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> f_;
  double ratio_min_ = 0.0;
  double ratio_max_ = 0.0;
  double mass_ = 0.0;
};

DensityField make_initial(const Equilibrium& eq, const InitialSpec& spec);

/// Cosine mode g_k with zero Neumann derivative at truncated walls
/// (cos(k pi (x+L) / 2L)) or the periodic mode cos(2 pi k x); in 2-D the
/// product of the axis modes.
double perturbation_mode(const Grid& grid, int cell, int mode);

/// Two-column text serialization (x [y] value per line, 17 significant
/// digits). Shared by Weight and DensityField snapshots.
void write_profile(const std::string& path, const Grid& grid,
                   std::span<const double> values);

}  // namespace ufd
