#include "ufd/grid.hpp"

#include <cmath>
#include <string>

#include "ufd/errors.hpp"

namespace ufd {

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::periodic_1d: return "periodic1d";
    case GridKind::truncated_1d: return "truncated1d";
    case GridKind::tensor_2d: return "tensor2d";
  }
  return "?";
}

double kahan_weighted_sum(std::span<const double> values, double weight) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v * weight - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

namespace {

void require_cells(int n) {
  if (n < 4) throw ConfigError("grid needs at least 4 cells per axis, got " + std::to_string(n));
}

}  // namespace

std::shared_ptr<const Grid> Grid::periodic_1d(int n_cells) {
  require_cells(n_cells);
  auto g = std::shared_ptr<Grid>(new Grid());
  g->kind_ = GridKind::periodic_1d;
  g->n_axis_ = n_cells;
  g->h_ = 1.0 / n_cells;
  g->cell_vol_ = g->h_;
  g->domain_vol_ = 1.0;
  g->half_width_ = 0.5;
  g->cx_.resize(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i)
    g->cx_[static_cast<std::size_t>(i)] = (i + 0.5) * g->h_;
  g->faces_.reserve(static_cast<std::size_t>(n_cells));
  for (int i = 0; i + 1 < n_cells; ++i) g->faces_.push_back({i, i + 1});
  g->faces_.push_back({n_cells - 1, 0});  // wrap face last
  return g;
}

std::shared_ptr<const Grid> Grid::truncated_1d(int n_cells, double half_width) {
  require_cells(n_cells);
  if (!(half_width > 0.0))
    throw ConfigError("truncated grid needs a positive half-width");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->kind_ = GridKind::truncated_1d;
  g->n_axis_ = n_cells;
  g->h_ = 2.0 * half_width / n_cells;
  g->cell_vol_ = g->h_;
  g->domain_vol_ = 2.0 * half_width;
  g->half_width_ = half_width;
  g->cx_.resize(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i)
    g->cx_[static_cast<std::size_t>(i)] = -half_width + (i + 0.5) * g->h_;
  g->faces_.reserve(static_cast<std::size_t>(n_cells - 1));
  for (int i = 0; i + 1 < n_cells; ++i) g->faces_.push_back({i, i + 1});
  return g;
}

std::shared_ptr<const Grid> Grid::tensor_2d(int n_per_axis, double half_width) {
  require_cells(n_per_axis);
  if (!(half_width > 0.0))
    throw ConfigError("tensor grid needs a positive half-width");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->kind_ = GridKind::tensor_2d;
  g->n_axis_ = n_per_axis;
  g->h_ = 2.0 * half_width / n_per_axis;
  g->cell_vol_ = g->h_ * g->h_;
  g->domain_vol_ = 4.0 * half_width * half_width;
  g->half_width_ = half_width;
  const int n = n_per_axis;
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  g->cx_.resize(total);
  g->cy_.resize(total);
  for (int iy = 0; iy < n; ++iy) {
    const double y = -half_width + (iy + 0.5) * g->h_;
    for (int ix = 0; ix < n; ++ix) {
      const auto cell = static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                        static_cast<std::size_t>(ix);
      g->cx_[cell] = -half_width + (ix + 0.5) * g->h_;
      g->cy_[cell] = y;
    }
  }
  g->faces_.reserve(2u * static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
  auto idx = [n](int ix, int iy) { return iy * n + ix; };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix + 1 < n; ++ix)
      g->faces_.push_back({idx(ix, iy), idx(ix + 1, iy)});
  for (int iy = 0; iy + 1 < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      g->faces_.push_back({idx(ix, iy), idx(ix, iy + 1)});
  return g;
}

std::shared_ptr<const Grid> Grid::build(GridKind kind, int n_cells,
                                        std::optional<double> half_width) {
  switch (kind) {
    case GridKind::periodic_1d:
      if (half_width)
        throw ConfigError("periodic grid lives on the unit domain; half-width not allowed");
      return periodic_1d(n_cells);
    case GridKind::truncated_1d:
      if (!half_width)
        throw ConfigError("truncated grid needs a half-width");
      return truncated_1d(n_cells, *half_width);
    case GridKind::tensor_2d:
      if (!half_width)
        throw ConfigError("tensor grid needs a half-width");
      return tensor_2d(n_cells, *half_width);
  }
  throw ConfigError("unknown grid kind");
}

double Grid::integrate(std::span<const double> values) const {
  if (values.size() != cx_.size())
    throw DimensionError("integrate: field size does not match the grid");
  return kahan_weighted_sum(values, cell_vol_);
}

bool Grid::nests(const Grid& other, double tol) const {
  if (kind_ != other.kind_ || periodic()) return false;
  if (std::abs(h_ - other.h_) > tol * h_) return false;
  if (other.half_width_ > half_width_ + tol * h_) return false;
  // edges align when the half-width difference is a whole number of cells
  const double cells = (half_width_ - other.half_width_) / h_;
  return std::abs(cells - std::round(cells)) <= tol;
}

}  // namespace ufd
