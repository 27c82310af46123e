#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ufd/config.hpp"

namespace ufd {

/// Process exit codes shared by the commands and the CLI.
enum ExitCode : int {
  exit_ok = 0,
  exit_violation = 1,  // a checked inequality failed
  exit_config = 2,     // bad configuration or parameters
  exit_numerical = 3,  // positivity loss, non-convergence, non-finite values
};

struct CommandOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<unsigned long long> seed;  // overrides config
  int jobs = 1;
};

/// Deterministic uniform double generator: identical streams on every
/// platform (a fixed 64-bit mixer feeding [0,1) mantissas directly, no
/// library distribution objects involved).
class SeededRng {
public:
  explicit SeededRng(unsigned long long seed) : state_(seed) {}
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)

private:
  std::uint64_t next_word();
  std::uint64_t state_;
};

/// Random admissible ratio field: 1 plus a seeded cosine series with
/// amplitudes shrinking like 1/mode^2 (positivity guaranteed by the
/// amplitude budget, rejection as a backstop), wrapped into a normalized
/// density with measured sandwich ratios.
DensityField random_field(const Equilibrium& eq, SeededRng& rng, int n_modes = 6,
                          double amplitude = 0.5);

/// simulate: march the configured initial data, write trajectory.csv,
/// initial/final profiles and summary.txt. Returns an ExitCode.
int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options);

/// poincare: spectral gap on a refinement ladder, CSV table plus
/// Richardson-extrapolated constant in the summary.
int cmd_poincare(const ExperimentConfig& config, const CommandOptions& options);

/// verify: seeded sweep of random fields through every bound check across
/// the three weight families and r in {1.5, 2, 3}; exit 1 with the
/// offending seed on any violation.
int cmd_verify(const ExperimentConfig& config, const CommandOptions& options);

/// localize: ladder study; CSV table of (k, a_k, b_k, c_k, C_k, L1 gaps).
int cmd_localize(const ExperimentConfig& config, const CommandOptions& options);

/// Shared driver: parse + validate + dispatch + map exceptions to exit
/// codes, writing error.txt into the output directory on failure.
int run_command(const std::string& command, const CommandOptions& options);

}  // namespace ufd
