#include "hallbraid/run_config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "hallbraid/snapshot_io.hpp"

namespace hallbraid {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (!(t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
  if (snapshot_stride < 1)
    throw ConfigError("config: snapshot_stride must be >= 1");
  if (output_dir.empty()) throw ConfigError("config: output_dir is empty");
  if (!(init_amplitude >= 0.0))
    throw ConfigError("config: init_amplitude must be >= 0");
  if (init_modes < 1) throw ConfigError("config: init_modes must be >= 1");
  grid.validate();
  try {
    solver.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

namespace {

double parse_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: malformed value for " + key + ": '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, const std::string& key) {
  const double x = parse_double(v, key);
  const long long i = static_cast<long long>(x);
  if (static_cast<double>(i) != x)
    throw ConfigError("config: " + key + " must be an integer");
  return i;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError("config: " + key + " must be a boolean");
}

}  // namespace

void apply_config_key(RunConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "alpha") {
    cfg.model = ModelParams(parse_double(value, key), cfg.model.beta,
                            cfg.model.gamma);
  } else if (key == "beta") {
    cfg.model = ModelParams(cfg.model.alpha, parse_double(value, key),
                            cfg.model.gamma);
  } else if (key == "gamma") {
    cfg.model = ModelParams(cfg.model.alpha, cfg.model.beta,
                            parse_double(value, key));
  } else if (key == "nx") {
    cfg.grid = GridSpec(static_cast<int>(parse_int(value, key)), cfg.grid.ny);
  } else if (key == "ny") {
    cfg.grid = GridSpec(cfg.grid.nx, static_cast<int>(parse_int(value, key)));
  } else if (key == "padded_nx") {
    cfg.grid = GridSpec(cfg.grid.nx, cfg.grid.ny,
                        static_cast<int>(parse_int(value, key)),
                        cfg.grid.padded_ny);
  } else if (key == "padded_ny") {
    cfg.grid = GridSpec(cfg.grid.nx, cfg.grid.ny, cfg.grid.padded_nx,
                        static_cast<int>(parse_int(value, key)));
  } else if (key == "window") {
    cfg.solver.window = parse_double(value, key);
  } else if (key == "nodes_per_window") {
    cfg.solver.nodes_per_window = static_cast<int>(parse_int(value, key));
  } else if (key == "picard_tol") {
    cfg.solver.picard_tol = parse_double(value, key);
  } else if (key == "picard_max_iter") {
    cfg.solver.picard_max_iter = static_cast<int>(parse_int(value, key));
  } else if (key == "adapt_window") {
    cfg.solver.adapt_window = parse_bool(value, key);
  } else if (key == "record_interior") {
    cfg.solver.record_interior = parse_bool(value, key);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(value, key);
  } else if (key == "snapshot_stride") {
    cfg.snapshot_stride = static_cast<int>(parse_int(value, key));
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "seed") {
    cfg.seed = static_cast<unsigned long long>(parse_int(value, key));
  } else if (key == "initial") {
    cfg.initial_path = value == "synthetic" ? std::string() : value;
  } else if (key == "init_amplitude") {
    cfg.init_amplitude = parse_double(value, key);
  } else if (key == "init_modes") {
    cfg.init_modes = static_cast<int>(parse_int(value, key));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not key=value");
    apply_config_key(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::string canonical_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "alpha=" << format_full(cfg.model.alpha) << "\n"
      << "beta=" << format_full(cfg.model.beta) << "\n"
      << "gamma=" << format_full(cfg.model.gamma) << "\n"
      << "nx=" << cfg.grid.nx << "\n"
      << "ny=" << cfg.grid.ny << "\n"
      << "padded_nx=" << cfg.grid.padded_nx << "\n"
      << "padded_ny=" << cfg.grid.padded_ny << "\n"
      << "window=" << format_full(cfg.solver.window) << "\n"
      << "nodes_per_window=" << cfg.solver.nodes_per_window << "\n"
      << "picard_tol=" << format_full(cfg.solver.picard_tol) << "\n"
      << "picard_max_iter=" << cfg.solver.picard_max_iter << "\n"
      << "adapt_window=" << (cfg.solver.adapt_window ? 1 : 0) << "\n"
      << "record_interior=" << (cfg.solver.record_interior ? 1 : 0) << "\n"
      << "t_end=" << format_full(cfg.t_end) << "\n"
      << "snapshot_stride=" << cfg.snapshot_stride << "\n"
      << "output_dir=" << cfg.output_dir << "\n"
      << "seed=" << cfg.seed << "\n"
      << "initial=" << (cfg.initial_path.empty() ? "synthetic"
                                                 : cfg.initial_path)
      << "\n"
      << "init_amplitude=" << format_full(cfg.init_amplitude) << "\n"
      << "init_modes=" << cfg.init_modes << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = canonical_config_text(cfg);
  unsigned long long h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

SpectralField synthesize_initial(const RunConfig& cfg) {
  SpectralField c(cfg.grid, 0.0);
  // splitmix64 stream; fully specified, so runs are reproducible across
  // platforms.
  unsigned long long state = cfg.seed;
  auto next_u64 = [&state]() {
    unsigned long long z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  auto next_unit = [&]() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  };

  const int m_band = std::min(4, cfg.grid.mmax());
  const int n_band = std::min(4, cfg.grid.ny);
  for (int k = 0; k < cfg.init_modes; ++k) {
    const int m = static_cast<int>(next_u64() % (2 * m_band + 1)) - m_band;
    const int n = 1 + static_cast<int>(next_u64() % n_band);
    const double amp = 0.5 + 0.5 * next_unit();
    const double phase = 2.0 * std::numbers::pi * next_unit();
    c.at(m, n) += std::polar(amp, phase);
  }
  c = enforce_symmetry(std::move(c));
  const double peak = c.max_abs();
  if (peak > 0.0)
    for (auto& v : c.data()) v *= cfg.init_amplitude / peak;
  return c;
}

namespace {

void write_energy_ledger(const std::string& path, const EnergyLedger& ledger,
                         const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path);
  out << "# HALLBRAID-ENERGY v1 config_hash=" << hash << "\n";
  out << "t energy dissipation_cum balance_residual gronwall_margin\n";
  for (size_t k = 0; k < ledger.times.size(); ++k) {
    out << format_full(ledger.times[k]) << " "
        << format_full(ledger.energy[k]) << " "
        << format_full(ledger.dissipation_cum[k]) << " "
        << format_full(ledger.balance_residual[k]) << " "
        << format_full(ledger.gronwall_margin[k]) << "\n";
  }
}

void write_picard_log(const std::string& path, const Trajectory& traj,
                      const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path);
  out << "# HALLBRAID-PICARD v1 config_hash=" << hash << "\n";
  out << "window delta iterations final_residual contraction_ratio\n";
  for (size_t w = 0; w < traj.contraction_log.size(); ++w) {
    const WindowLog& e = traj.contraction_log[w];
    out << w << " " << format_full(e.delta) << " " << e.iterations << " "
        << format_full(e.final_residual) << " "
        << format_full(e.contraction_ratio) << "\n";
  }
}

void write_outputs(const RunConfig& cfg, const Trajectory& traj,
                   const std::string& hash) {
  const fs::path dir(cfg.output_dir);
  int written = 0;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const bool last = k + 1 == traj.snapshots.size();
    if (k % static_cast<size_t>(cfg.snapshot_stride) != 0 && !last) continue;
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%06d.txt", written++);
    write_snapshot((dir / name).string(), traj.snapshots[k], traj.params,
                   hash);
  }
  if (traj.snapshots.size() >= 2)
    write_energy_ledger((dir / "energy.txt").string(), energy_balance(traj),
                        hash);
  write_picard_log((dir / "picard_log.txt").string(), traj, hash);
}

}  // namespace

RunOutputs run_simulation(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const std::string hash = config_hash(cfg);

  RunOutputs out;
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream cfg_out(fs::path(cfg.output_dir) / "config.txt");
    cfg_out << "# HALLBRAID-CONFIG v1 config_hash=" << hash << "\n"
            << canonical_config_text(cfg);
  }

  SpectralField initial =
      cfg.initial_path.empty()
          ? synthesize_initial(cfg)
          : load_initial_condition(cfg.initial_path).field;
  if (initial.grid().nx != cfg.grid.nx || initial.grid().ny != cfg.grid.ny)
    throw ConfigError("run: initial condition grid does not match config");

  log << "run: hash " << hash << ", t_end " << cfg.t_end << ", grid "
      << cfg.grid.nx << "x" << cfg.grid.ny << "\n";
  try {
    out.trajectory = solve(initial, cfg.t_end, cfg.model, cfg.solver);
  } catch (const ContractionFailure& failure) {
    log << "run: contraction failure: " << failure.what() << "\n";
    out.trajectory = failure.partial;
    out.exit_code = 3;
    out.message = failure.what();
    if (!out.trajectory.snapshots.empty())
      write_outputs(cfg, out.trajectory, hash);
    return out;
  }
  write_outputs(cfg, out.trajectory, hash);
  out.ledger = energy_balance(out.trajectory);
  log << "run: " << out.trajectory.snapshots.size() << " snapshots, "
      << out.trajectory.contraction_log.size() << " windows\n";
  return out;
}

int diagnose_directory(const std::string& dir, std::ostream& out) {
  std::vector<fs::path> snaps;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snap_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".txt")
      snaps.push_back(entry.path());
  }
  std::sort(snaps.begin(), snaps.end());
  if (snaps.size() < 2)
    throw ParseError("diagnose: need at least two snapshots in " + dir);

  Trajectory traj;
  ModelParams params;
  for (const auto& path : snaps) {
    ModelParams snap_params;
    traj.snapshots.push_back(read_snapshot(path.string(), &snap_params));
    params = snap_params;
  }
  traj.params = params;

  const EnergyLedger ledger = energy_balance(traj);
  out << "t energy dissipation_cum balance_residual gronwall_margin\n";
  bool ok = true;
  for (size_t k = 0; k < ledger.times.size(); ++k) {
    out << format_full(ledger.times[k]) << " "
        << format_full(ledger.energy[k]) << " "
        << format_full(ledger.dissipation_cum[k]) << " "
        << format_full(ledger.balance_residual[k]) << " "
        << format_full(ledger.gronwall_margin[k]) << "\n";
    if (ledger.gronwall_margin[k] > 1e-6) ok = false;
  }

  // Modewise Poincare: dissipation dominates energy for zero-mean fields.
  for (const auto& snap : traj.snapshots) {
    double e = 0.0, d = 0.0;
    const GridSpec& g = snap.grid();
    for (int n = 1; n <= g.ny; ++n)
      for (int m = -g.mmax(); m <= g.mmax(); ++m) {
        const double a2 = std::norm(snap.at(m, n));
        e += a2;
        d += static_cast<double>(n) * n * a2;
      }
    if (d < e * (1.0 - 1e-12)) ok = false;
  }

  if (traj.snapshots.size() >= 3) {
    try {
      const std::vector<double> residuals = pde_residual(traj, params);
      out << "pde_residual";
      for (double r : residuals) out << " " << format_full(r);
      out << "\n";
    } catch (const SpacingError&) {
      out << "pde_residual skipped: snapshots not uniformly spaced\n";
    }
  }
  out << (ok ? "diagnose: PASS\n" : "diagnose: FAIL\n");
  return ok ? 0 : 4;
}

}  // namespace hallbraid
