#include "hallbraid/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "hallbraid/parallel.hpp"
#include "hallbraid/quadrature.hpp"

namespace hallbraid {

namespace {

double cube(int m) {
  const double md = static_cast<double>(m);
  return md * md * md;
}

double lsym(int m, int n, double gamma) {
  const double nd = static_cast<double>(n);
  return gamma * cube(m) / (nd * nd);
}

}  // namespace

double weight(int m, int n, double tau, const WeightSpec& spec,
              WeightExponent which, const ModelParams& p) {
  if (n == 0) throw DomainError("weight: n must be nonzero");
  const double e = which == WeightExponent::B ? spec.b : spec.bprime;
  const double rho =
      std::pow(static_cast<double>(std::abs(n) + std::abs(m)), 2.0 * spec.s);
  const double omega = std::pow(
      static_cast<double>(n) * n + std::abs(tau - dispersion_symbol(m, n, p)),
      2.0 * e);
  return rho * omega;
}

double resonance_gap(int m, int n, int mp, int np, const ModelParams& p) {
  if (n == 0 || np == 0 || n - np == 0)
    throw DomainError("resonance_gap: n, n', n-n' must all be nonzero");
  return std::abs(dispersion_symbol(m, n, p) -
                  dispersion_symbol(mp, np, p) -
                  dispersion_symbol(m - mp, n - np, p));
}

double resonance_g(double zeta) {
  if (zeta == 0.5) throw PoleError("resonance_g: pole at zeta = 1/2");
  return zeta * (2.0 - zeta) / (2.0 * zeta - 1.0);
}

double resonance_f(double eta, double zeta) {
  if (zeta == 0.0 || zeta == 1.0 || zeta == 0.5)
    throw PoleError("resonance_f: pole at zeta in {0, 1/2, 1}");
  const double d = eta - zeta;
  const double denom = zeta * zeta * (1.0 - zeta) * (1.0 - zeta);
  return d * d / denom * (2.0 * zeta - 1.0) * (eta - resonance_g(zeta));
}

double q_factor(int m, int n, int mp, int np, const WeightSpec& spec,
                const ModelParams& p) {
  const double gap = resonance_gap(m, n, mp, np, p);
  return std::pow(static_cast<double>(std::abs(n)), -4.0 * spec.b) *
         std::pow(static_cast<double>(n) * n + gap, 2.0 * spec.bprime - 2.0);
}

const char* partition_name(PartitionLabel label) {
  switch (label) {
    case PartitionLabel::B0: return "B0";
    case PartitionLabel::B1: return "B1";
    case PartitionLabel::Sc: return "Sc";
    case PartitionLabel::Tc: return "Tc";
    case PartitionLabel::S1capT: return "S1capT";
    case PartitionLabel::S0capT: return "S0capT";
  }
  return "?";
}

double partition_k(int n, const WeightSpec& spec) {
  return std::min(0.1, std::pow(static_cast<double>(std::abs(n)),
                                -2.0 / 3.0 +
                                    2.0 * (spec.bprime - spec.b)));
}

double partition_k1(int n) { return 0.1 / std::abs(n); }

Classification classify(int m, int n, int mp, int np, const WeightSpec& spec) {
  if (n == 0 || np == 0 || np == n)
    throw DomainError("classify: tuple outside the summation lattice");
  const double zeta = static_cast<double>(np) / n;
  if (!(zeta >= 0.5))
    throw DomainError("classify: tuple outside the n'/n >= 1/2 half-lattice");
  if (m == 0)
    throw DomainError("classify: partition requires m != 0");
  const double eta = static_cast<double>(mp) / m;

  Classification out{PartitionLabel::B0, eta, zeta};
  if (np == 2 * n) return out;
  if (2L * std::abs(static_cast<long>(mp)) >
      3L * std::abs(static_cast<long>(m))) {
    out.label = PartitionLabel::B1;
    return out;
  }

  const double k1 = partition_k1(n);
  const bool in_s0 = std::abs(eta) <= k1;
  const bool in_s1 = std::abs(1.0 - eta) <= k1;
  if (!in_s0 && !in_s1) {
    out.label = PartitionLabel::Sc;
    return out;
  }
  const double k = partition_k(n, spec);
  // The near-resonance condition in the pole-free polynomial form
  // (2z-1)*eta - (2z-1)*g(z) = (2z-1)*eta - z*(2-z).
  const bool in_t =
      std::abs((2.0 * zeta - 1.0) * eta - zeta * (2.0 - zeta)) <= k ||
      std::abs(eta - zeta) <= k;
  if (!in_t) {
    out.label = PartitionLabel::Tc;
    return out;
  }
  out.label = in_s1 ? PartitionLabel::S1capT : PartitionLabel::S0capT;
  return out;
}

namespace {

// Specialized integrator for f(x) = ((a1 + |x-c1|)(a2 + |x-c2|))^(-p):
// Gauss-Kronrod panels between and geometrically beyond the kinks, a small
// fixed-capacity refinement queue, and series tails.  One pow per
// evaluation; this is the hot path of the lattice scan.
struct PairIntegrand {
  double a1, c1, a2, c2, p;
  double operator()(double x) const {
    const double u = a1 + std::abs(x - c1);
    const double v = a2 + std::abs(x - c2);
    return std::pow(u * v, -p);
  }
};

constexpr double kFastXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kFastWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kFastWg[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};

struct FastPanel {
  double a, b, value, error;
};

FastPanel fast_panel(const PairIntegrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double gk = 0.0, g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kFastXgk[i];
    const double fsum = i == 7 ? f(mid) : f(mid - dx) + f(mid + dx);
    gk += kFastWgk[i] * fsum;
    if (i % 2 == 1) g += kFastWg[i / 2] * fsum;
  }
  return {a, b, gk * half, std::abs((gk - g) * half)};
}

double fast_pair_integral(double a1, double c1, double a2, double c2,
                          double p, double rel_tol) {
  const PairIntegrand f{a1, c1, a2, c2, p};
  const double spread = std::abs(c1 - c2);
  const double w = spread + a1 + a2 + 8.0;
  const double k_lo = std::min(c1, c2);
  const double k_hi = std::max(c1, c2);
  const double lo = k_lo - w;
  const double hi = k_hi + w;

  constexpr int kCapacity = 96;
  FastPanel panels[kCapacity];
  int count = 0;
  auto push = [&](double a, double b) {
    if (a < b && count < kCapacity) panels[count++] = fast_panel(f, a, b);
  };

  // Structure-following initial panels: geometric peeling away from each
  // kink, outward to the tails and inward across the between-kinks region.
  const double scale = std::max({a1, a2, 1.0});
  if (k_hi > k_lo) {
    double a = k_lo, b = k_hi;
    for (double step = scale; b - a > 2.0 * step; step *= 6.0) {
      push(a, a + step);
      push(b - step, b);
      a += step;
      b -= step;
    }
    push(a, b);
  }
  double edge = k_hi;
  for (double step = scale; edge < hi; step *= 6.0) {
    const double next = std::min(edge + step, hi);
    push(edge, next);
    edge = next;
  }
  edge = k_lo;
  for (double step = scale; edge > lo; step *= 6.0) {
    const double next = std::max(edge - step, lo);
    push(next, edge);
    edge = next;
  }

  const double tails = pair_power_tail(hi, a1 - c1, a2 - c2, p) +
                       pair_power_tail(-lo, a1 + c1, a2 + c2, p);

  for (int round = 0; round < 4 * kCapacity; ++round) {
    double total = tails, err = 0.0;
    int worst = 0;
    for (int i = 0; i < count; ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (err <= rel_tol * std::abs(total) || count >= kCapacity)
      return total;
    const FastPanel old = panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    panels[worst] = fast_panel(f, old.a, mid);
    panels[count++] = fast_panel(f, mid, old.b);
  }
  double total = tails;
  for (int i = 0; i < count; ++i) total += panels[i].value;
  return total;
}

// Precomputed powers shared by the bound pass and the attribution of one
// kernel_sum call.
struct SumTables {
  std::vector<double> rho;       // (|m|+|n|)^(2s) by |m|+|n|
  std::vector<double> inv4b;     // k^(-4b)
  std::vector<double> pow2m4b;   // k^(2-4b)
};

SumTables make_tables(int m, int n, const LatticeTruncation& trunc,
                      const WeightSpec& spec) {
  SumTables t;
  const int rho_max = std::abs(m) + trunc.mmax + std::abs(n) + trunc.nmax + 2;
  t.rho.resize(rho_max + 1, 1.0);
  for (int k = 1; k <= rho_max; ++k)
    t.rho[k] = std::pow(static_cast<double>(k), 2.0 * spec.s);
  const int n_max = std::abs(n) + trunc.nmax + 2;
  t.inv4b.resize(n_max + 1, 0.0);
  t.pow2m4b.resize(n_max + 1, 0.0);
  for (int k = 1; k <= n_max; ++k) {
    t.inv4b[k] = std::pow(static_cast<double>(k), -4.0 * spec.b);
    t.pow2m4b[k] = std::pow(static_cast<double>(k), 2.0 - 4.0 * spec.b);
  }
  return t;
}

}  // namespace

KernelSumResult kernel_sum(int m, int n, double tau,
                           const LatticeTruncation& trunc,
                           const WeightSpec& spec, const ModelParams& p,
                           double quad_rel_tol, double prune_rel) {
  if (n == 0) throw DomainError("kernel_sum: n must be nonzero");
  if (trunc.mmax < 1 || trunc.nmax < 1)
    throw DomainError("kernel_sum: truncation bounds must be >= 1");

  KernelSumResult out;
  if (m == 0) return out;  // the m^2 prefactor annihilates the probe

  // The summand is invariant under (m,n,tau) -> (m,-n,tau) and under
  // (m,n,tau) -> (-m,n,-tau); canonicalize to m,n > 0.
  if (n < 0) n = -n;
  if (m < 0) {
    m = -m;
    tau = -tau;
  }

  const SumTables tables = make_tables(m, n, trunc, spec);
  const double l_parent = lsym(m, n, p.gamma);
  const double dist = std::abs(tau - l_parent);
  const double n2 = static_cast<double>(n) * n;
  const double prefactor = static_cast<double>(m) * m *
                           tables.rho[m + n] *
                           std::pow(n2 + dist, 2.0 * spec.bprime) /
                           (n2 * n2 + dist * dist);
  const double tail_const = 2.0 / (2.0 * spec.b - 1.0);
  const double b2 = 2.0 * spec.b;

  const int M = trunc.mmax, N = trunc.nmax;
  const long width = 2L * M + 1;

  // Rigorous per-term bound on the tau1 integral: split at the kink
  // midpoint and bound the off-kink factor by its value there,
  //   I <= (2/(2b-1)) [a1^(1-2b) (a2+s/2)^(-2b) + a2^(1-2b) (a1+s/2)^(-2b)],
  // s the kink separation; the s = 0 floor form is taken when smaller.
  std::vector<double> bounds(static_cast<size_t>(2 * N + 1) * width, 0.0);
  double bound_sum = 0.0;
  for (int np = -N; np <= N; ++np) {
    if (np == 0 || np == n) continue;
    const int an = std::abs(np);
    const int anc = std::abs(n - np);
    const double a1 = static_cast<double>(an) * an;
    const double a2 = static_cast<double>(anc) * anc;
    const double t1 = tables.pow2m4b[an];    // a1^(1-2b)
    const double t2 = tables.pow2m4b[anc];   // a2^(1-2b)
    const double floor_bound =
        std::min(tables.inv4b[anc] * t1, tables.inv4b[an] * t2);
    for (int mp = -M; mp <= M; ++mp) {
      const double s =
          std::abs(tau - lsym(mp, np, p.gamma) - lsym(m - mp, n - np, p.gamma));
      const double split_bound = t1 * std::pow(a2 + 0.5 * s, -b2) +
                                 t2 * std::pow(a1 + 0.5 * s, -b2);
      const double i_bound = tail_const * std::min(split_bound, floor_bound);
      const double w = prefactor * i_bound /
                       (tables.rho[std::abs(mp) + an] *
                        tables.rho[std::abs(m - mp) + anc]);
      bounds[static_cast<size_t>(np + N) * width + (mp + M)] = w;
      bound_sum += w;
    }
  }

  // Suffix-budget prune: terms are binned by bound magnitude and the
  // lowest bins are dropped wholesale while their accumulated bound stays
  // below prune_rel * bound_sum.  The dropped mass is reported.
  double threshold = 0.0;
  if (prune_rel > 0.0 && bound_sum > 0.0) {
    constexpr int kBins = 160;
    double bin_mass[kBins] = {0.0};
    const double top = bound_sum;
    for (double w : bounds) {
      if (w <= 0.0) continue;
      int bin = static_cast<int>(-std::log2(w / top));
      bin = std::clamp(bin, 0, kBins - 1);
      bin_mass[bin] += w;
    }
    const double budget = prune_rel * bound_sum;
    double suffix = 0.0;
    int cut = kBins;  // drop bins with index >= cut
    for (int bin = kBins - 1; bin >= 0; --bin) {
      if (suffix + bin_mass[bin] > budget) break;
      suffix += bin_mass[bin];
      cut = bin;
    }
    threshold = cut < kBins ? top * std::ldexp(1.0, -cut) : 0.0;
  }
  const double k_t = partition_k(n, spec);
  const double k1_t = partition_k1(n);

  auto label_index = [&](int rm, int rn) -> int {
    if (rn == 2 * n) return static_cast<int>(PartitionLabel::B0);
    if (2L * std::abs(static_cast<long>(rm)) >
        3L * std::abs(static_cast<long>(m)))
      return static_cast<int>(PartitionLabel::B1);
    const double eta = static_cast<double>(rm) / m;
    const double zeta = static_cast<double>(rn) / n;
    const bool in_s0 = std::abs(eta) <= k1_t;
    const bool in_s1 = std::abs(1.0 - eta) <= k1_t;
    if (!in_s0 && !in_s1) return static_cast<int>(PartitionLabel::Sc);
    const bool in_t =
        std::abs((2.0 * zeta - 1.0) * eta - zeta * (2.0 - zeta)) <= k_t ||
        std::abs(eta - zeta) <= k_t;
    if (!in_t) return static_cast<int>(PartitionLabel::Tc);
    return static_cast<int>(in_s1 ? PartitionLabel::S1capT
                                  : PartitionLabel::S0capT);
  };

  for (int np = -N; np <= N; ++np) {
    if (np == 0 || np == n) continue;
    const int an = std::abs(np);
    const int anc = std::abs(n - np);
    const double a1 = static_cast<double>(an) * an;
    const double a2 = static_cast<double>(anc) * anc;
    for (int mp = -M; mp <= M; ++mp) {
      const double w =
          bounds[static_cast<size_t>(np + N) * width + (mp + M)];
      if (w < threshold) {
        out.neglected_bound += w;
        ++out.terms_pruned;
        continue;
      }
      const double c1 = lsym(mp, np, p.gamma);
      const double c2 = tau - lsym(m - mp, n - np, p.gamma);
      const double integral =
          fast_pair_integral(a1, c1, a2, c2, 2.0 * spec.b, quad_rel_tol);
      const double term = prefactor * integral /
                          (tables.rho[std::abs(mp) + an] *
                           tables.rho[std::abs(m - mp) + anc]);
      // Attribute to the half-lattice representative of the summand's
      // symmetry pair.
      const int rep_m = 2 * np >= n ? mp : m - mp;
      const int rep_n = 2 * np >= n ? np : n - np;
      out.by_partition[label_index(rep_m, rep_n)] += term;
      out.total += term;
      ++out.terms_evaluated;
    }
  }
  return out;
}

std::vector<double> tau_probes(int m, int n, const SupScanConfig& cfg,
                               const ModelParams& p) {
  const double l = lsym(m, n, p.gamma);
  const double n2 = static_cast<double>(n) * n;
  std::vector<double> taus{l};
  for (int j = cfg.dyadic_lo; j <= cfg.dyadic_hi; ++j)
    taus.push_back(l + n2 * std::ldexp(1.0, j));
  const int r = cfg.resonance_radius;
  for (int np = -r; np <= r; ++np) {
    if (np == 0 || np == n) continue;
    for (int mp = -r; mp <= r; ++mp)
      taus.push_back(lsym(mp, np, p.gamma) + lsym(m - mp, n - np, p.gamma));
  }
  std::sort(taus.begin(), taus.end());
  // The weight varies on the n^2 scale; closer probes are redundant.
  taus.erase(std::unique(taus.begin(), taus.end(),
                         [n2](double a, double b) {
                           return std::abs(a - b) <= n2 / 32.0;
                         }),
             taus.end());
  return taus;
}

KernelReport sup_scan(const SupScanConfig& cfg, const WeightSpec& spec,
                      const ModelParams& p) {
  if (cfg.ladder.empty()) throw DomainError("sup_scan: empty ladder");
  KernelReport report;
  const int threads = configured_thread_count(cfg.threads);

  if (cfg.probe_mmax < 1 || cfg.probe_nmax < 1)
    throw DomainError("sup_scan: probe ranges must be >= 1");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(cfg.probe_mmax) * cfg.probe_nmax);
  for (int n = 1; n <= cfg.probe_nmax; ++n)
    for (int m = 1; m <= cfg.probe_mmax; ++m) pairs.emplace_back(m, n);

  for (size_t rung_i = 0; rung_i < cfg.ladder.size(); ++rung_i) {
    const LatticeTruncation trunc = cfg.ladder[rung_i];
    if (trunc.mmax < 1 || trunc.nmax < 1)
      throw DomainError("sup_scan: ladder rungs must be >= 1");
    const bool last = rung_i + 1 == cfg.ladder.size();

    std::vector<std::vector<KernelProbeRow>> rows(pairs.size());
    parallel_for(pairs.size(), threads, [&](size_t i) {
      const auto [m, n] = pairs[i];
      const std::vector<double> taus = tau_probes(m, n, cfg, p);
      auto& mine = rows[i];
      mine.reserve(taus.size());
      for (double tau : taus) {
        const KernelSumResult sum = kernel_sum(m, n, tau, trunc, spec, p,
                                               cfg.quad_rel_tol,
                                               cfg.prune_rel);
        KernelProbeRow row;
        row.m = m;
        row.n = n;
        row.tau = tau;
        row.value = sum.total;
        row.by_partition = sum.by_partition;
        mine.push_back(row);
      }
    });

    KernelRung rung;
    rung.trunc = trunc;
    for (const auto& pair_rows : rows) {
      for (const auto& row : pair_rows) {
        ++rung.probe_count;
        if (row.value > rung.supremum) {
          rung.supremum = row.value;
          rung.sup_m = row.m;
          rung.sup_n = row.n;
          rung.sup_tau = row.tau;
        }
      }
    }
    report.rungs.push_back(rung);
    if (last && cfg.keep_rows) {
      for (auto& pair_rows : rows)
        report.rows.insert(report.rows.end(), pair_rows.begin(),
                           pair_rows.end());
    }
  }

  report.supremum = report.rungs.back().supremum;
  if (report.rungs.size() >= 2) {
    const double a = report.rungs[report.rungs.size() - 2].supremum;
    const double b = report.rungs.back().supremum;
    report.plateau = b > 0.0 ? std::abs(b - a) / b : 0.0;
  }
  return report;
}

namespace {

std::vector<double> geometric_fill(std::vector<double> base, int density) {
  // density > 1 inserts midpoints between consecutive grid values.
  std::vector<double> out = std::move(base);
  for (int d = 1; d < density; ++d) {
    std::vector<double> finer;
    finer.reserve(out.size() * 2);
    for (size_t i = 0; i < out.size(); ++i) {
      finer.push_back(out[i]);
      if (i + 1 < out.size())
        finer.push_back(0.5 * (out[i] + out[i + 1]));
    }
    out = std::move(finer);
  }
  return out;
}

LemmaSection pointwise_product_section(const WeightSpec& spec,
                                       const LemmaGrids& grids,
                                       bool refined) {
  LemmaSection sec;
  sec.name = "pointwise-product-bound";
  const double b = spec.b;
  const double bp = spec.bprime;
  const int tau_count = (refined ? 512 : 256) * grids.density;

  const std::vector<double> k3s = geometric_fill({0.5, 1.0, 3.0, 9.0},
                                                 grids.density);
  const std::vector<double> centers =
      geometric_fill({-11.0, -2.0, 0.0, 1.7, 5.0, 23.0}, grids.density);

  for (double k3 : k3s) {
    for (double k2 : centers) {
      for (double k4 : centers) {
        const double rhs = std::pow(k3, -2.0 * b) *
                           std::pow(k3 + std::abs(k2 - k4), -2.0 * (1.0 - bp));
        auto lhs_at = [&](double tau) {
          return std::pow(k3 + std::abs(tau - k2), -2.0 * (1.0 - bp)) *
                 std::pow(k3 + std::abs(tau - k4), -2.0 * b);
        };
        const double lo = std::min(k2, k4) - 4.0 * k3 - 8.0;
        const double hi = std::max(k2, k4) + 4.0 * k3 + 8.0;
        double best_lhs = lhs_at(k4);
        double best_tau = k4;
        for (int j = 0; j <= tau_count; ++j) {
          const double tau = lo + (hi - lo) * j / tau_count;
          const double v = lhs_at(tau);
          if (v > best_lhs) {
            best_lhs = v;
            best_tau = tau;
          }
        }
        LemmaRatioRow row;
        row.params = {k2, k3, k4, best_tau};
        row.lhs = best_lhs;
        row.rhs = rhs;
        row.ratio = best_lhs / rhs;
        sec.rows.push_back(row);
      }
    }
  }
  for (const auto& row : sec.rows)
    sec.max_ratio = std::max(sec.max_ratio, row.ratio);
  return sec;
}

LemmaSection convolution_tail_section(const WeightSpec& spec,
                                      const LemmaGrids& grids, bool refined) {
  LemmaSection sec;
  sec.name = "convolution-tail-bound";
  const double b = spec.b;
  const double tol =
      refined ? grids.quad_rel_tol / grids.refine_factor : grids.quad_rel_tol;

  const std::vector<double> k1s = geometric_fill({1.0, 2.0, 4.0, 16.0},
                                                 grids.density);
  const std::vector<double> ratios = {1.0, 3.0, 10.0};
  const std::vector<double> centers =
      geometric_fill({-50.0, -7.0, 0.0, 1.0, 9.0, 64.0}, grids.density);

  for (double k1 : k1s) {
    for (double ratio : ratios) {
      const double k3 = k1 * ratio;
      for (double k2 : centers) {
        for (double k4 : centers) {
          const double lhs =
              two_kink_integral(k1, k2, 2.0 * b, k3, k4, 2.0 * b, tol);
          const double rhs = std::pow(k1, 1.0 - 2.0 * b) /
                             std::pow(k3 + std::abs(k2 - k4), 2.0 * b);
          LemmaRatioRow row;
          row.params = {k1, k2, k3, k4};
          row.lhs = lhs;
          row.rhs = rhs;
          row.ratio = lhs / rhs;
          sec.rows.push_back(row);
        }
      }
    }
  }
  for (const auto& row : sec.rows)
    sec.max_ratio = std::max(sec.max_ratio, row.ratio);
  return sec;
}

LemmaSection cubic_resonance_section(const WeightSpec& spec,
                                     const LemmaGrids& grids, bool refined) {
  LemmaSection sec;
  sec.name = "cubic-resonance-bound";
  const double b = spec.b;
  const double tol =
      refined ? grids.quad_rel_tol / grids.refine_factor : grids.quad_rel_tol;

  const std::vector<double> xis =
      geometric_fill({-4.0, -1.0, -0.3, 0.3, 1.0, 2.2, 4.7}, grids.density);
  for (double xi : xis) {
    if (xi == 0.0) continue;
    const double res_tau = xi * xi * xi / 4.0;
    std::vector<double> taus = {res_tau, res_tau + 0.6, res_tau - 0.6, 0.0,
                                1.3, -3.1, 12.0, -45.0};
    for (double tau : taus) {
      const double a3 = 3.0 * xi;
      const double c = tau - xi * xi * xi / 4.0;
      // Integrand (1 + |c - a3 y^2|)^(-2b), even in y.
      auto h = [&](double y) {
        return std::pow(1.0 + std::abs(c - a3 * y * y), -2.0 * b);
      };
      const double kink2 = c / a3;
      const double ystar = kink2 > 0.0 ? std::sqrt(kink2) : -1.0;
      const double d_tail = (1.0 - (a3 > 0.0 ? c : -c)) / std::abs(a3);
      const double r = std::max({ystar > 0.0 ? 1.5 * ystar : 0.0,
                                 std::sqrt(2.0 * std::abs(d_tail)) + 1.0,
                                 8.0});
      std::vector<double> pts{0.0};
      if (ystar > 0.0 && ystar < r) pts.push_back(ystar);
      pts.push_back(r);
      const double middle = integrate_adaptive(h, pts, tol);
      const double tail =
          std::pow(std::abs(a3), -2.0 * b) * power_tail_sym(r, d_tail, 2.0 * b);
      const double lhs = 2.0 * (middle + tail);
      const double rhs =
          1.0 / (std::sqrt(std::abs(xi)) *
                 std::sqrt(1.0 + std::abs(4.0 * tau - xi * xi * xi)));
      LemmaRatioRow row;
      row.params = {xi, tau, 0.0, 0.0};
      row.lhs = lhs;
      row.rhs = rhs;
      row.ratio = lhs / rhs;
      sec.rows.push_back(row);
    }
  }
  for (const auto& row : sec.rows)
    sec.max_ratio = std::max(sec.max_ratio, row.ratio);
  return sec;
}

void attach_refinement(LemmaSection& base, const LemmaSection& refined) {
  base.refined_max_ratio = refined.max_ratio;
  base.rel_change =
      base.max_ratio > 0.0
          ? std::abs(base.max_ratio - refined.max_ratio) / base.max_ratio
          : 0.0;
}

}  // namespace

bool LemmaReport::stable(double tol) const {
  return pointwise_product_bound.rel_change <= tol &&
         convolution_tail_bound.rel_change <= tol &&
         cubic_resonance_bound.rel_change <= tol &&
         std::isfinite(pointwise_product_bound.max_ratio) &&
         std::isfinite(convolution_tail_bound.max_ratio) &&
         std::isfinite(cubic_resonance_bound.max_ratio);
}

LemmaReport check_appendix_lemmas(const WeightSpec& spec,
                                  const LemmaGrids& grids) {
  LemmaReport report;
  report.pointwise_product_bound =
      pointwise_product_section(spec, grids, false);
  attach_refinement(report.pointwise_product_bound,
                    pointwise_product_section(spec, grids, true));
  report.convolution_tail_bound =
      convolution_tail_section(spec, grids, false);
  attach_refinement(report.convolution_tail_bound,
                    convolution_tail_section(spec, grids, true));
  report.cubic_resonance_bound = cubic_resonance_section(spec, grids, false);
  attach_refinement(report.cubic_resonance_bound,
                    cubic_resonance_section(spec, grids, true));
  return report;
}

}  // namespace hallbraid
