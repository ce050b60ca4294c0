#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hallbraid/diagnostics.hpp"
#include "oracles.hpp"

using namespace hallbraid;
constexpr double kPi = std::numbers::pi;

namespace {

PhysicalField cosine_sample(const GridSpec& g, int n, double amplitude) {
  PhysicalField f(g);
  for (int i = 0; i < g.x_points(); ++i)
    for (int j = 0; j < g.y_points(); ++j)
      f.at(i, j) = amplitude * std::cos(n * g.y_node(j));
  return f;
}

Trajectory exact_decoupled_trajectory(const GridSpec& g, const ModelParams& p,
                                      int n, double dt, int count) {
  Trajectory traj;
  traj.params = p;
  for (int k = 0; k < count; ++k) {
    const double t = k * dt;
    SpectralField snap(g, t);
    snap.at(0, n) = Complex(0.5 * std::exp(-p.alpha * n * n * t), 0.0);
    traj.snapshots.push_back(snap);
  }
  return traj;
}

}  // namespace

TEST_CASE("l2 energy of cos(y) is pi^2; zero field has none") {
  const GridSpec g(8, 8);
  CHECK(l2_energy(cosine_sample(g, 1, 1.0)) ==
        doctest::Approx(kPi * kPi).epsilon(1e-13));
  CHECK(l2_energy(PhysicalField(g)) == 0.0);
}

TEST_CASE("Parseval energy agrees with plain grid quadrature") {
  const GridSpec g(16, 12);
  const SpectralField c = oracles::random_symmetric_field(g, 13, 0.3);
  const PhysicalField f = inverse_transform(c);
  const double spectral = l2_energy(f);
  const double grid = oracles::grid_quadrature_energy(f);
  CHECK(std::abs(spectral - grid) < 1e-10 * grid);
}

TEST_CASE("dissipation of cos(ny) carries the n^2 multiplier") {
  const GridSpec g(8, 8);
  CHECK(dissipation(cosine_sample(g, 1, 1.0)) ==
        doctest::Approx(kPi * kPi).epsilon(1e-13));
  CHECK(dissipation(cosine_sample(g, 2, 1.0)) ==
        doctest::Approx(4.0 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("Poincare: dissipation dominates energy for zero-mean fields") {
  const GridSpec g(12, 8);
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    const SpectralField c = oracles::random_symmetric_field(g, seed, 0.5);
    const PhysicalField f = inverse_transform(c);
    CHECK(dissipation(f) >= l2_energy(f) * (1.0 - 1e-12));
  }
}

TEST_CASE("energy balance: exact decoupled trajectory closes the identity") {
  // Trapezoid closure error is (dt^2/12) int |E''|; dt = 2e-4 puts it well
  // under the 1e-8 relative target.
  const GridSpec g(8, 8);
  const ModelParams p(1.0, 0.0, 1.0);
  const Trajectory traj = exact_decoupled_trajectory(g, p, 1, 2e-4, 250);
  const EnergyLedger ledger = energy_balance(traj);
  const double scale = ledger.energy[0];
  for (double r : ledger.balance_residual) CHECK(r <= 1e-8 * scale);
  for (size_t k = 1; k < ledger.dissipation_cum.size(); ++k)
    CHECK(ledger.dissipation_cum[k] >= ledger.dissipation_cum[k - 1]);
}

TEST_CASE("energy balance: zero trajectory gives an all-zero ledger") {
  const GridSpec g(8, 8);
  Trajectory traj;
  traj.params = ModelParams(1.0, 0.2, 1.0);
  for (int k = 0; k < 4; ++k) {
    SpectralField snap(g, 0.1 * k);
    traj.snapshots.push_back(snap);
  }
  const EnergyLedger ledger = energy_balance(traj);
  for (size_t k = 0; k < ledger.times.size(); ++k) {
    CHECK(ledger.energy[k] == 0.0);
    CHECK(ledger.dissipation_cum[k] == 0.0);
    CHECK(ledger.balance_residual[k] == 0.0);
    CHECK(ledger.gronwall_margin[k] == 0.0);
  }
}

TEST_CASE("energy balance residual shrinks at second order in dt") {
  const GridSpec g(16, 16);
  const ModelParams p(1.0, 0.5, 1.0);
  SolverConfig cfg;
  cfg.nodes_per_window = 5;
  cfg.picard_tol = 1e-13;

  SpectralField c0(g, 0.0);
  c0.at(1, 1) = Complex(0.06, 0.08);
  c0.at(-1, 1) = std::conj(c0.at(1, 1));
  c0.at(1, 2) = Complex(0.03, -0.04);
  c0.at(-1, 2) = std::conj(c0.at(1, 2));

  auto worst_residual = [&](double window) {
    cfg.window = window;
    const Trajectory traj = solve(c0, 0.25, p, cfg);
    const EnergyLedger ledger = energy_balance(traj);
    double worst = 0.0;
    for (double r : ledger.balance_residual) worst = std::max(worst, r);
    return worst / ledger.energy[0];
  };
  const double coarse = worst_residual(1.0 / 64.0);
  const double fine = worst_residual(1.0 / 128.0);
  const double ratio = coarse / fine;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("Gronwall margin stays within tolerance on solver trajectories") {
  const GridSpec g(16, 16);
  const ModelParams p(1.0, 0.5, 1.0);
  SolverConfig cfg;
  cfg.window = 1.0 / 64.0;
  cfg.picard_tol = 1e-13;
  SpectralField c0(g, 0.0);
  c0.at(1, 1) = Complex(0.06, 0.08);
  c0.at(-1, 1) = std::conj(c0.at(1, 1));
  c0.at(0, 1) = Complex(0.05, 0.0);
  const Trajectory traj = solve(c0, 0.5, p, cfg);
  const EnergyLedger ledger = energy_balance(traj);
  for (double margin : ledger.gronwall_margin) CHECK(margin <= 1e-6);
}

TEST_CASE("pde residual: exact trajectory converges at second order") {
  const GridSpec g(8, 8);
  const ModelParams p(1.0, 0.4, 1.0);
  const Trajectory coarse = exact_decoupled_trajectory(g, p, 2, 2e-3, 9);
  const Trajectory fine = exact_decoupled_trajectory(g, p, 2, 1e-3, 17);
  const double rc = pde_residual(coarse, p)[3];
  const double rf = pde_residual(fine, p)[7];  // same physical time t = 8e-3
  const double ratio = rc / rf;
  CHECK(ratio > 3.4);
  CHECK(ratio < 4.6);
}

TEST_CASE("pde residual: zero trajectory, spacing guard, snapshot count") {
  const GridSpec g(8, 8);
  const ModelParams p(1.0, 0.0, 1.0);
  Trajectory traj;
  traj.params = p;
  for (int k = 0; k < 3; ++k)
    traj.snapshots.push_back(SpectralField(g, 0.1 * k));
  for (double r : pde_residual(traj, p)) CHECK(r == 0.0);

  traj.snapshots.back().set_time(0.35);
  CHECK_THROWS_AS(pde_residual(traj, p), SpacingError);

  traj.snapshots.resize(2);
  CHECK_THROWS_AS(pde_residual(traj, p), DomainError);
}

TEST_CASE("pde residual of a production solver run stays small") {
  const GridSpec g(16, 16);
  const ModelParams p(1.0, 0.5, 1.0);
  SolverConfig cfg;
  cfg.window = 1.0 / 128.0;
  cfg.picard_tol = 1e-13;
  SpectralField c0(g, 0.0);
  c0.at(1, 1) = Complex(0.06, 0.08);
  c0.at(-1, 1) = std::conj(c0.at(1, 1));
  c0.at(1, 2) = Complex(0.03, -0.04);
  c0.at(-1, 2) = std::conj(c0.at(1, 2));
  const Trajectory traj = solve(c0, 0.125, p, cfg);
  // Regression bound pinned from the first measured run (max 1.77e-3,
  // dominated by the centered time difference at window cadence).
  for (double r : pde_residual(traj, p)) CHECK(r < 2.5e-3);
}

TEST_CASE("weighted Sobolev norm: pinned fixture, homogeneity, monotonicity") {
  const GridSpec g(8, 8);
  SpectralField c(g);
  c.at(1, 1) = Complex(1.0, 0.0);
  // Stored (1,1) counts its implied (1,-1) mirror: 2 * (|1|+|1|)^(2s) with
  // the |n| weight equal to one.
  CHECK(hs0b_norm(c, 2.6, 0.55) ==
        doctest::Approx(std::pow(2.0, 3.1)).epsilon(1e-12));

  const SpectralField r = oracles::random_symmetric_field(g, 9, 0.3);
  SpectralField r3 = r;
  for (auto& v : r3.data()) v *= -3.0;
  CHECK(hs0b_norm(r3, 2.6, 0.55) ==
        doctest::Approx(3.0 * hs0b_norm(r, 2.6, 0.55)).epsilon(1e-12));

  // Monotone in s when every mode has |m| + |n| >= 2.
  SpectralField shifted(g);
  shifted.at(1, 2) = Complex(0.5, 0.1);
  shifted.at(-1, 2) = std::conj(shifted.at(1, 2));
  shifted.at(2, 1) = Complex(0.2, -0.3);
  shifted.at(-2, 1) = std::conj(shifted.at(2, 1));
  CHECK(hs0b_norm(shifted, 2.8, 0.55) > hs0b_norm(shifted, 2.6, 0.55));
}

TEST_CASE("weighted Sobolev norm reduces to the plain Sobolev sum at b = 1/2") {
  const GridSpec g(8, 8);
  const SpectralField c = oracles::random_symmetric_field(g, 41, 0.7);
  const double s = 2.6;
  double plain = 0.0;
  for (int n = 1; n <= g.ny; ++n)
    for (int m = -g.mmax(); m <= g.mmax(); ++m)
      plain += 2.0 * std::pow(static_cast<double>(n + std::abs(m)), 2.0 * s) *
               std::norm(c.at(m, n));
  CHECK(hs0b_norm(c, s, 0.5) ==
        doctest::Approx(std::sqrt(plain)).epsilon(1e-12));
}

TEST_CASE("cutoff: plateau, support, bounds and monotone shoulders") {
  const CutoffSpec cutoff(0.25);
  CHECK(cutoff.phi(0.0) == 1.0);
  CHECK(cutoff.phi(0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cutoff.phi(-0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cutoff.phi(0.5) == 0.0);
  CHECK(cutoff.phi(-0.5) == 0.0);
  CHECK(cutoff.phi(0.7) == 0.0);
  double prev = 1.0;
  for (int k = 1; k <= 64; ++k) {
    const double t = 0.25 + 0.25 * k / 64.0;
    const double v = cutoff.phi(t);
    CHECK(v >= 0.0);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK_THROWS_AS(CutoffSpec(-1.0), DomainError);
}

namespace {

CoefficientHistory single_mode_history(const CutoffSpec& cutoff, int samples,
                                       double scale) {
  // Smooth surrogate: phi(t) * exp(-alpha * smoothed-ramp(t)).
  CoefficientHistory history;
  history.dt = 4.0 * cutoff.delta / samples;
  history.t_begin = -2.0 * cutoff.delta + 0.5 * history.dt;
  ModeHistory mode;
  mode.m = 0;
  mode.n = 1;
  for (int k = 0; k < samples; ++k) {
    const double t = history.t_begin + k * history.dt;
    const double ramp = 0.5 * (t + std::sqrt(t * t + 0.01));
    mode.samples.push_back(scale * cutoff.phi(t) * std::exp(-ramp));
  }
  history.modes.push_back(mode);
  return history;
}

}  // namespace

TEST_CASE("space-time norm: zero history, homogeneity, refinement stability") {
  const ModelParams p(1.0, 0.0, 1.0);
  const WeightSpec spec(2.6, 0.55, 0.6);
  const CutoffSpec cutoff(0.25, 256);

  CoefficientHistory zero = single_mode_history(cutoff, 256, 0.0);
  CHECK(tsb_norm(zero, spec, cutoff, p) == 0.0);

  const CoefficientHistory base = single_mode_history(cutoff, 256, 1.0);
  const CoefficientHistory scaled = single_mode_history(cutoff, 256, -2.5);
  const double n1 = tsb_norm(base, spec, cutoff, p);
  const double n2 = tsb_norm(scaled, spec, cutoff, p);
  CHECK(n2 == doctest::Approx(2.5 * n1).epsilon(1e-10));

  const CoefficientHistory fine = single_mode_history(cutoff, 512, 1.0);
  const double nf = tsb_norm(fine, spec, cutoff, p);
  CHECK(std::abs(nf - n1) / n1 < 1e-3);
}

TEST_CASE("space-time norm rejects unresolvable sampling") {
  const ModelParams p(1.0, 0.0, 1.0);
  const WeightSpec spec(2.6, 0.55, 0.6);
  const CutoffSpec cutoff(0.25, 16);
  // A fast oscillation on 16 samples leaks at the sampling Nyquist edge.
  CoefficientHistory history;
  history.dt = 4.0 * cutoff.delta / 16;
  history.t_begin = -2.0 * cutoff.delta + 0.5 * history.dt;
  ModeHistory mode;
  mode.m = 0;
  mode.n = 1;
  for (int k = 0; k < 16; ++k) {
    const double t = history.t_begin + k * history.dt;
    mode.samples.push_back(cutoff.phi(t) * std::cos(200.0 * t));
  }
  history.modes.push_back(mode);
  CHECK_THROWS_AS(tsb_norm(history, spec, cutoff, p), ResolutionError);
}
