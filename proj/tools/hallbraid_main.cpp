// Command-line driver: run (simulate), verify-kernel (interaction-kernel
// sup scan), check-lemmas (inequality spot checks), diagnose (re-check a
// trajectory directory).
//
// Exit codes: 0 success, 2 configuration error, 3 contraction failure,
// 4 verification failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hallbraid/kernel.hpp"
#include "hallbraid/run_config.hpp"
#include "hallbraid/snapshot_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitContraction = 3;
constexpr int kExitVerification = 4;

struct KeyOverride {
  std::string key;
  std::string value;
};

void write_kernel_report(const std::string& path,
                         const hallbraid::KernelReport& report) {
  std::ofstream out(path);
  if (!out) throw hallbraid::ParseError("cannot open " + path);
  out << "# HALLBRAID-KERNEL v1\n";
  out << "m n tau value B0 B1 Sc Tc S1capT S0capT\n";
  for (const auto& row : report.rows) {
    out << row.m << " " << row.n << " " << hallbraid::format_full(row.tau)
        << " " << hallbraid::format_full(row.value);
    for (double v : row.by_partition)
      out << " " << hallbraid::format_full(v);
    out << "\n";
  }
  for (const auto& rung : report.rungs)
    out << "# rung trunc=" << rung.trunc.mmax
        << " sup=" << hallbraid::format_full(rung.supremum)
        << " at m=" << rung.sup_m << " n=" << rung.sup_n
        << " tau=" << hallbraid::format_full(rung.sup_tau)
        << " probes=" << rung.probe_count << "\n";
}

void print_lemma_section(std::ostream& out,
                         const hallbraid::LemmaSection& sec) {
  out << sec.name << ": max_ratio=" << sec.max_ratio
      << " refined=" << sec.refined_max_ratio
      << " rel_change=" << sec.rel_change << " rows=" << sec.rows.size()
      << "\n";
}

void write_lemma_report(const std::string& path,
                        const hallbraid::LemmaReport& report) {
  std::ofstream out(path);
  if (!out) throw hallbraid::ParseError("cannot open " + path);
  out << "# HALLBRAID-LEMMAS v1\n";
  for (const auto* sec :
       {&report.pointwise_product_bound, &report.convolution_tail_bound,
        &report.cubic_resonance_bound}) {
    out << "section " << sec->name
        << " max_ratio=" << hallbraid::format_full(sec->max_ratio)
        << " refined=" << hallbraid::format_full(sec->refined_max_ratio)
        << " rel_change=" << hallbraid::format_full(sec->rel_change) << "\n";
    out << "p0 p1 p2 p3 lhs rhs ratio\n";
    for (const auto& row : sec->rows) {
      for (double p : row.params) out << hallbraid::format_full(p) << " ";
      out << hallbraid::format_full(row.lhs) << " "
          << hallbraid::format_full(row.rhs) << " "
          << hallbraid::format_full(row.ratio) << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulator and numerical verification suite "
               "for the diffusive-dispersive river-braiding equation"};
  app.require_subcommand(1);

  // ---- run ----------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Simulate and write a trajectory");
  std::string config_path;
  std::vector<std::string> sets;
  run_cmd->add_option("--config", config_path, "key=value config file");
  run_cmd->add_option("--set", sets, "override key=value (repeatable)");
  std::optional<double> opt_alpha, opt_beta, opt_gamma, opt_tend, opt_window;
  std::optional<int> opt_nx, opt_ny, opt_stride, opt_nodes;
  std::optional<long long> opt_seed;
  std::optional<std::string> opt_out, opt_initial;
  run_cmd->add_option("--alpha", opt_alpha, "diffusion coefficient");
  run_cmd->add_option("--beta", opt_beta, "linear forcing coefficient");
  run_cmd->add_option("--gamma", opt_gamma, "dispersion coefficient");
  run_cmd->add_option("--nx", opt_nx, "x modes");
  run_cmd->add_option("--ny", opt_ny, "y cosine frequencies");
  run_cmd->add_option("--t-end", opt_tend, "final time");
  run_cmd->add_option("--window", opt_window, "fixed-point window length");
  run_cmd->add_option("--nodes-per-window", opt_nodes, "window nodes");
  run_cmd->add_option("--snapshot-stride", opt_stride, "snapshot cadence");
  run_cmd->add_option("--output-dir", opt_out, "output directory");
  run_cmd->add_option("--seed", opt_seed, "synthetic initial data seed");
  run_cmd->add_option("--initial", opt_initial,
                      "initial condition file (snapshot or grid table)");

  // ---- verify-kernel -------------------------------------------------
  auto* vk_cmd = app.add_subcommand(
      "verify-kernel", "Scan the interaction-kernel sum for a bounded sup");
  double vk_s = 2.6, vk_b = 0.55, vk_bprime = 0.6, vk_gamma = 1.0;
  int vk_mmax = 32, vk_nmax = 32, vk_tau_probes = 15, vk_res_radius = 2;
  double vk_plateau = 0.05;
  bool vk_override = false;
  std::string vk_out = "kernel_report.txt";
  vk_cmd->add_option("--s", vk_s, "Sobolev exponent s");
  vk_cmd->add_option("--b", vk_b, "time exponent b");
  vk_cmd->add_option("--bprime", vk_bprime, "time exponent b'");
  vk_cmd->add_option("--gamma", vk_gamma, "dispersion coefficient");
  vk_cmd->add_option("--mmax", vk_mmax, "probe/truncation bound in m");
  vk_cmd->add_option("--nmax", vk_nmax, "probe/truncation bound in n");
  vk_cmd->add_option("--tau-probes", vk_tau_probes,
                     "number of dyadic tau probes per mode");
  vk_cmd->add_option("--resonance-radius", vk_res_radius,
                     "resonance tau sample radius");
  vk_cmd->add_option("--plateau-threshold", vk_plateau,
                     "acceptance threshold for the truncation plateau");
  vk_cmd->add_flag("--override-exponents", vk_override,
                   "allow exponents outside the admissible window");
  vk_cmd->add_option("--output", vk_out, "report file");

  // ---- check-lemmas ---------------------------------------------------
  auto* cl_cmd = app.add_subcommand(
      "check-lemmas", "Quadrature spot checks of the kernel inequalities");
  double cl_s = 2.6, cl_b = 0.55, cl_bprime = 0.6;
  int cl_density = 1;
  std::string cl_out = "lemma_report.txt";
  cl_cmd->add_option("--s", cl_s, "Sobolev exponent s");
  cl_cmd->add_option("--b", cl_b, "time exponent b");
  cl_cmd->add_option("--bprime", cl_bprime, "time exponent b'");
  cl_cmd->add_option("--grid-density", cl_density, "parameter grid density");
  cl_cmd->add_option("--output", cl_out, "report file");

  // ---- diagnose -------------------------------------------------------
  auto* dg_cmd =
      app.add_subcommand("diagnose", "Re-check a trajectory directory");
  std::string dg_dir;
  dg_cmd->add_option("dir", dg_dir, "trajectory directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) {
      hallbraid::RunConfig cfg;
      if (!config_path.empty()) cfg = hallbraid::parse_config_file(config_path);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw hallbraid::ConfigError("--set expects key=value, got '" + kv +
                                       "'");
        hallbraid::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      auto set_kv = [&cfg](const char* key, const auto& opt) {
        if (opt) {
          std::ostringstream ss;
          ss << hallbraid::format_full(static_cast<double>(*opt));
          hallbraid::apply_config_key(cfg, key, ss.str());
        }
      };
      set_kv("alpha", opt_alpha);
      set_kv("beta", opt_beta);
      set_kv("gamma", opt_gamma);
      set_kv("nx", opt_nx);
      set_kv("ny", opt_ny);
      set_kv("t_end", opt_tend);
      set_kv("window", opt_window);
      set_kv("nodes_per_window", opt_nodes);
      set_kv("snapshot_stride", opt_stride);
      set_kv("seed", opt_seed);
      if (opt_out) cfg.output_dir = *opt_out;
      if (opt_initial) cfg.initial_path = *opt_initial;

      const hallbraid::RunOutputs outputs =
          hallbraid::run_simulation(cfg, std::cout);
      if (outputs.exit_code != 0)
        std::cerr << "contraction failure: " << outputs.message << "\n";
      return outputs.exit_code;
    }

    if (*vk_cmd) {
      hallbraid::WeightSpec spec;
      try {
        spec = hallbraid::WeightSpec(vk_s, vk_b, vk_bprime, vk_override);
      } catch (const hallbraid::DomainError& e) {
        throw hallbraid::ConfigError(e.what());
      }
      const hallbraid::ModelParams params(1.0, 0.0, vk_gamma);
      hallbraid::SupScanConfig scan;
      scan.probe_mmax = vk_mmax;
      scan.probe_nmax = vk_nmax;
      scan.ladder = {{vk_mmax, vk_nmax}, {2 * vk_mmax, 2 * vk_nmax}};
      scan.dyadic_hi = scan.dyadic_lo + vk_tau_probes - 1;
      scan.resonance_radius = vk_res_radius;
      const hallbraid::KernelReport report =
          hallbraid::sup_scan(scan, spec, params);
      write_kernel_report(vk_out, report);
      std::cout << "sup=" << hallbraid::format_full(report.supremum)
                << " plateau=" << hallbraid::format_full(report.plateau)
                << "\n";
      for (const auto& rung : report.rungs)
        std::cout << "  trunc " << rung.trunc.mmax << ": sup "
                  << hallbraid::format_full(rung.supremum) << " at (m="
                  << rung.sup_m << ", n=" << rung.sup_n << ")\n";
      return report.plateau <= vk_plateau ? kExitOk : kExitVerification;
    }

    if (*cl_cmd) {
      hallbraid::WeightSpec spec;
      try {
        spec = hallbraid::WeightSpec(cl_s, cl_b, cl_bprime);
      } catch (const hallbraid::DomainError& e) {
        throw hallbraid::ConfigError(e.what());
      }
      hallbraid::LemmaGrids grids;
      grids.density = cl_density;
      const hallbraid::LemmaReport report =
          hallbraid::check_appendix_lemmas(spec, grids);
      write_lemma_report(cl_out, report);
      print_lemma_section(std::cout, report.pointwise_product_bound);
      print_lemma_section(std::cout, report.convolution_tail_bound);
      print_lemma_section(std::cout, report.cubic_resonance_bound);
      return report.stable(0.02) ? kExitOk : kExitVerification;
    }

    if (*dg_cmd) return hallbraid::diagnose_directory(dg_dir, std::cout);
  } catch (const hallbraid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hallbraid::ContractionFailure& e) {
    std::cerr << "contraction failure: " << e.what() << "\n";
    return kExitContraction;
  } catch (const hallbraid::QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const hallbraid::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
