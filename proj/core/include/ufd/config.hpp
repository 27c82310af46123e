#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ufd/grid.hpp"
#include "ufd/localization.hpp"
#include "ufd/solver.hpp"
#include "ufd/weights.hpp"

namespace ufd {

/// Flat key-value configuration: one `key = value` per line, '#' comments,
/// dotted prefixes group sections (weight.kind, solver.t_end, ...).
/// Unknown keys are rejected so typos fail loudly.
class KeyValueConfig {
public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;  // comma separated

  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int_or(const std::string& key, long long fallback) const;

  /// Keys actually present, in file order (for copying into run outputs).
  const std::vector<std::string>& keys() const { return order_; }
  std::string render() const;

  /// Throws ConfigError if any present key is not in `allowed`.
  void restrict_keys(const std::vector<std::string>& allowed) const;

private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

/// Fully validated description of one experiment.
struct ExperimentConfig {
  GridKind grid_kind = GridKind::truncated_1d;
  int n_cells = 400;                  // per axis for tensor grids
  std::optional<double> half_width;   // default: 6 * equilibrium std
  PotentialSpec weight;
  double r = 2.0;
  InitialSpec initial;
  SolverConfig solver;
  double poincare_tol = 1e-10;
  std::vector<long long> poincare_ladder;  // cell counts for cmd_poincare
  LadderConfig ladder;                     // for cmd_localize
  long long verify_samples = 500;
  unsigned long long seed = 12345;

  static ExperimentConfig from_kv(const KeyValueConfig& kv);
};

/// 6 * largest equilibrium standard deviation: the default truncation
/// half-width for unbounded weights.
double default_half_width(const PotentialSpec& weight, double r);

}  // namespace ufd
