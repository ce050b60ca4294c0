#ifndef HALLBRAID_RUN_CONFIG_HPP
#define HALLBRAID_RUN_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "hallbraid/diagnostics.hpp"
#include "hallbraid/solver.hpp"

namespace hallbraid {

// Flat key=value run description; every CLI flag shadows one key.
struct RunConfig {
  ModelParams model;
  GridSpec grid{16, 16};
  SolverConfig solver;
  double t_end = 0.25;
  int snapshot_stride = 1;
  std::string output_dir = "out";
  unsigned long long seed = 1;
  std::string initial_path;     // empty: synthesize from the seed
  double init_amplitude = 0.01;
  int init_modes = 3;

  void validate() const;
};

// Parses a key=value file ('#' comments allowed).  Unknown keys are errors.
RunConfig parse_config_file(const std::string& path);

// Applies one key=value assignment (shared by the file parser and CLI
// flags).  Throws ConfigError for unknown keys or malformed values.
void apply_config_key(RunConfig& cfg, const std::string& key,
                      const std::string& value);

// Canonical serialization (fixed key order, full precision) and its FNV-1a
// hash; every output file of a run carries the hash.
std::string canonical_config_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// Deterministic synthetic initial data: `init_modes` low modes with
// seed-derived amplitudes and phases, scaled to `init_amplitude`.
SpectralField synthesize_initial(const RunConfig& cfg);

struct RunOutputs {
  int exit_code = 0;
  Trajectory trajectory;
  EnergyLedger ledger;
  std::string message;
};

// Drives a full simulation: initial data, windowed solve, snapshot series,
// energy ledger and fixed-point log under cfg.output_dir.  Returns exit
// code 0 on success, 3 on contraction failure (partial outputs written).
RunOutputs run_simulation(const RunConfig& cfg, std::ostream& log);

// Reloads a snapshot directory, recomputes the diagnostics and re-checks the
// ledger bounds.  Returns 0, or 4 when a bound is violated.
int diagnose_directory(const std::string& dir, std::ostream& out);

}  // namespace hallbraid

#endif
