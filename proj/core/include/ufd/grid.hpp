#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ufd {

enum class GridKind { periodic_1d, truncated_1d, tensor_2d };

std::string to_string(GridKind kind);

/// One interior face between adjacent cells a and b. Boundary walls of
/// truncated grids carry no face (zero flux); the periodic wrap face is
/// listed last.
struct Face {
  std::int32_t a;
  std::int32_t b;
};

/// Uniform cell-centered mesh on [0,1] (periodic), [-L,L], or [-L,L]^2.
/// All discrete sums in the project (integrals, Dirichlet forms, fluxes)
/// run over the cell list and the face list of one of these, so every
/// module sees the same discrete geometry.
class Grid {
public:
  static std::shared_ptr<const Grid> periodic_1d(int n_cells);
  static std::shared_ptr<const Grid> truncated_1d(int n_cells, double half_width);
  static std::shared_ptr<const Grid> tensor_2d(int n_per_axis, double half_width);
  static std::shared_ptr<const Grid> build(GridKind kind, int n_cells,
                                           std::optional<double> half_width);

  GridKind kind() const { return kind_; }
  int dim() const { return kind_ == GridKind::tensor_2d ? 2 : 1; }
  bool periodic() const { return kind_ == GridKind::periodic_1d; }

  /// Cells per axis (equals n_cells() in one dimension).
  int n_per_axis() const { return n_axis_; }
  int n_cells() const { return static_cast<int>(cx_.size()); }

  double spacing() const { return h_; }
  double cell_volume() const { return cell_vol_; }
  /// Volume of the dual cell a face gradient sample represents: h in 1-D,
  /// h^2 in 2-D. Used identically by the dissipation sum, the Dirichlet
  /// form and the stiffness assembly.
  double face_volume() const { return cell_vol_; }
  double domain_volume() const { return domain_vol_; }
  /// Half-width L of truncated grids; 0.5 for the periodic unit domain.
  double half_width() const { return half_width_; }

  double x(int cell) const { return cx_[static_cast<std::size_t>(cell)]; }
  double y(int cell) const { return cy_[static_cast<std::size_t>(cell)]; }
  std::span<const double> centers_x() const { return cx_; }
  std::span<const double> centers_y() const { return cy_; }

  std::span<const Face> faces() const { return faces_; }

  /// Midpoint-rule integral with compensated (Kahan) summation.
  double integrate(std::span<const double> values) const;

  /// True if `other` is a coaxial sub-box of this grid with the same
  /// spacing and aligned cell edges.
  bool nests(const Grid& other, double tol = 1e-9) const;

private:
  Grid() = default;

  GridKind kind_ = GridKind::periodic_1d;
  int n_axis_ = 0;
  double h_ = 0.0;
  double cell_vol_ = 0.0;
  double domain_vol_ = 0.0;
  double half_width_ = 0.0;
  std::vector<double> cx_;
  std::vector<double> cy_;
  std::vector<Face> faces_;
};

/// Kahan-compensated sum of `values[i] * weight`.
double kahan_weighted_sum(std::span<const double> values, double weight);

}  // namespace ufd
