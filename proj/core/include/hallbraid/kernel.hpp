#ifndef HALLBRAID_KERNEL_HPP
#define HALLBRAID_KERNEL_HPP

#include <array>
#include <string>
#include <vector>

#include "hallbraid/model.hpp"
#include "hallbraid/weight_spec.hpp"

namespace hallbraid {

enum class WeightExponent { B, BPrime };

// Space-time weight W(m,n)(tau) = rho(m,n) * omega(m,n)(tau; b or b').
double weight(int m, int n, double tau, const WeightSpec& spec,
              WeightExponent which, const ModelParams& p);

// |l(m,n) - l(m',n') - l(m-m',n-n')|: the phase mismatch of the quadratic
// interaction (m',n') + (m-m',n-n') -> (m,n).
double resonance_gap(int m, int n, int mp, int np, const ModelParams& p);

// Normalized gap in ratio coordinates eta = m'/m, zeta = n'/n:
//   gap = |gamma m^3/n^2| * |f(eta, zeta)|.
double resonance_g(double zeta);
double resonance_f(double eta, double zeta);

// Q(m,n,m',n') = |n|^(-4b) (n^2 + gap)^(2b'-2).
double q_factor(int m, int n, int mp, int np, const WeightSpec& spec,
                const ModelParams& p);

// Disjoint decomposition of the half-lattice (n'/n >= 1/2, n' != 0, n' != n)
// into the regions requiring different interaction estimates, in the fixed
// precedence order B0, B1, Sc, Tc, S1capT, S0capT.
enum class PartitionLabel : int { B0 = 0, B1, Sc, Tc, S1capT, S0capT };

constexpr int kPartitionCount = 6;
const char* partition_name(PartitionLabel label);

struct Classification {
  PartitionLabel label;
  double eta;
  double zeta;
};

Classification classify(int m, int n, int mp, int np, const WeightSpec& spec);

double partition_k(int n, const WeightSpec& spec);    // min{1/10, |n|^(-2/3+2b'-2b)}
double partition_k1(int n);                           // 1/(10 |n|)

struct LatticeTruncation {
  int mmax = 16;
  int nmax = 16;
};

struct KernelSumResult {
  double total = 0.0;
  std::array<double, kPartitionCount> by_partition{};
  double neglected_bound = 0.0;  // accumulated bound of pruned terms
  long terms_evaluated = 0;
  long terms_pruned = 0;
};

// One inner sum of the interaction kernel at probe (m, n, tau): for every
// (m',n') in the truncated lattice, the tau1 integral of
//   m^2 W(m,n)(tau;b') / (|n^2 + i(tau - l)|^2 W(m',n')(tau1;b)
//                         W(m-m',n-n')(tau-tau1;b))
// is evaluated by kink-split adaptive quadrature with closed-form power
// tails, and attributed to the partition of the summand's half-lattice
// representative.  A maximal low-bound suffix of terms whose rigorous
// bounds sum below prune_rel of the whole sum's bound is skipped; the
// skipped mass is reported in neglected_bound (prune_rel = 0 evaluates
// every term).
KernelSumResult kernel_sum(int m, int n, double tau,
                           const LatticeTruncation& trunc,
                           const WeightSpec& spec, const ModelParams& p,
                           double quad_rel_tol = 1e-9,
                           double prune_rel = 1e-9);

struct KernelProbeRow {
  int m = 0;
  int n = 0;
  double tau = 0.0;
  double value = 0.0;
  std::array<double, kPartitionCount> by_partition{};
};

struct KernelRung {
  LatticeTruncation trunc;
  double supremum = 0.0;
  int sup_m = 0;
  int sup_n = 0;
  double sup_tau = 0.0;
  long probe_count = 0;
};

struct KernelReport {
  std::vector<KernelRung> rungs;
  std::vector<KernelProbeRow> rows;  // per-probe rows of the final rung
  double supremum = 0.0;             // final rung
  double plateau = 0.0;              // |sup_last - sup_prev| / sup_last
};

struct SupScanConfig {
  // Probe modes (m,n) in [1,probe_mmax] x [1,probe_nmax]; every rung of the
  // truncation ladder re-sums the same probes over a larger inner lattice,
  // and the plateau compares the last two rungs.
  int probe_mmax = 32;
  int probe_nmax = 32;
  std::vector<LatticeTruncation> ladder = {{32, 32}, {64, 64}};
  int dyadic_lo = -2;                  // tau = l + n^2 * 2^j, j in [lo, hi]
  int dyadic_hi = 12;
  int resonance_radius = 2;            // resonance tau samples |m'|,|n'| <= r
  double quad_rel_tol = 1e-9;
  // Scan-level suffix budget: each probe skips low-bound terms summing to
  // at most this fraction of the probe's bound mass, orders of magnitude
  // below the plateau resolution.
  double prune_rel = 1e-4;
  int threads = 0;                     // 0: HALLBRAID_THREADS or hardware
  bool keep_rows = true;
};

// Running supremum of kernel_sum over probe modes (m,n) in [1,L]^2 and the
// tau probe family, per truncation rung.  Deterministic under any thread
// count (per-probe results are reduced in index order).
KernelReport sup_scan(const SupScanConfig& cfg, const WeightSpec& spec,
                      const ModelParams& p);

std::vector<double> tau_probes(int m, int n, const SupScanConfig& cfg,
                               const ModelParams& p);

// Quadrature spot checks of the three pointwise/integral inequalities used
// by the kernel bound.  Each section reports max LHS/RHS over a parameter
// grid, re-measured under refined quadrature.
struct LemmaRatioRow {
  std::array<double, 4> params{};  // meaning depends on the section
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct LemmaSection {
  std::string name;
  std::vector<LemmaRatioRow> rows;
  double max_ratio = 0.0;
  double refined_max_ratio = 0.0;
  double rel_change = 0.0;
};

struct LemmaGrids {
  int density = 1;
  double quad_rel_tol = 1e-8;
  double refine_factor = 100.0;  // refined pass tightens the tolerance
};

struct LemmaReport {
  LemmaSection pointwise_product_bound;   // params: k2, k3, k4, tau*
  LemmaSection convolution_tail_bound;    // params: k1, k2, k3, k4
  LemmaSection cubic_resonance_bound;     // params: xi, tau, 0, 0
  bool stable(double tol = 0.02) const;
};

LemmaReport check_appendix_lemmas(const WeightSpec& spec,
                                  const LemmaGrids& grids);

}  // namespace hallbraid

#endif
