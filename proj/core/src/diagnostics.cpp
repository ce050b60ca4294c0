#include "hallbraid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hallbraid {

namespace {

constexpr double kPi = std::numbers::pi;

// 48-point Gauss-Legendre rule on [-1,1], computed once by Newton iteration.
struct GaussLegendre {
  std::vector<double> x, w;
  GaussLegendre() {
    const int n = 48;
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

double bump(double r) {
  const double q = 1.0 - r * r;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// int_r^1 exp(-1/(1-rho^2)) drho.
double bump_tail(double r) {
  static const GaussLegendre rule;
  if (r >= 1.0) return 0.0;
  if (r < -1.0) r = -1.0;
  const double mid = 0.5 * (r + 1.0), half = 0.5 * (1.0 - r);
  double sum = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i)
    sum += rule.w[i] * bump(mid + half * rule.x[i]);
  return half * sum;
}

// Cosine-series coefficients of one x-column, c[n] = (2/P) sum_j f_j cos(n y_j)
// for n >= 1 and c[0] the column mean.
void column_cosine_coeffs(const PhysicalField& f, int i,
                          std::vector<double>& c) {
  const int py = f.grid().y_points();
  c.assign(py, 0.0);
  for (int n = 0; n < py; ++n) {
    double acc = 0.0;
    for (int j = 0; j < py; ++j)
      acc += f.at(i, j) * std::cos(n * kPi * (j + 0.5) / py);
    c[n] = (n == 0 ? 1.0 : 2.0) * acc / py;
  }
}

double modal_energy(const SpectralField& c, double beta) {
  double sum = 0.0;
  for (const auto& v : c.data()) sum += std::norm(v);
  return std::exp(2.0 * beta * c.time()) * 4.0 * kPi * kPi * sum;
}

double modal_dissipation(const SpectralField& c, double beta) {
  const GridSpec& g = c.grid();
  double sum = 0.0;
  for (int n = 1; n <= g.ny; ++n)
    for (int m = -g.mmax(); m <= g.mmax(); ++m)
      sum += static_cast<double>(n) * n * std::norm(c.at(m, n));
  return std::exp(2.0 * beta * c.time()) * 4.0 * kPi * kPi * sum;
}

}  // namespace

double CutoffSpec::phi(double t) const {
  const double a = std::abs(t);
  if (a <= delta) return 1.0;
  if (a >= 2.0 * delta) return 0.0;
  static const double total = bump_tail(-1.0);
  const double r = (a - 1.5 * delta) / (0.5 * delta);
  return bump_tail(r) / total;
}

double l2_energy(const PhysicalField& f) {
  const GridSpec& g = f.grid();
  std::vector<double> c;
  double total = 0.0;
  for (int i = 0; i < g.x_points(); ++i) {
    column_cosine_coeffs(f, i, c);
    double col = kPi * c[0] * c[0];
    for (size_t n = 1; n < c.size(); ++n) col += 0.5 * kPi * c[n] * c[n];
    total += col;
  }
  return total * 2.0 * kPi / g.x_points();
}

double dissipation(const PhysicalField& f) {
  const GridSpec& g = f.grid();
  std::vector<double> c;
  double total = 0.0;
  for (int i = 0; i < g.x_points(); ++i) {
    column_cosine_coeffs(f, i, c);
    double col = 0.0;
    for (size_t n = 1; n < c.size(); ++n)
      col += 0.5 * kPi * static_cast<double>(n * n) * c[n] * c[n];
    total += col;
  }
  return total * 2.0 * kPi / g.x_points();
}

EnergyLedger energy_balance(const Trajectory& traj) {
  if (traj.snapshots.size() < 2)
    throw DomainError("energy_balance: need at least two snapshots");
  const double beta = traj.params.beta;
  const double alpha = traj.params.alpha;

  EnergyLedger ledger;
  const size_t K = traj.snapshots.size();
  ledger.times.resize(K);
  ledger.energy.resize(K);
  ledger.dissipation_cum.resize(K);
  ledger.balance_residual.resize(K);
  ledger.gronwall_margin.resize(K);

  std::vector<double> diss(K);
  for (size_t k = 0; k < K; ++k) {
    ledger.times[k] = traj.snapshots[k].time();
    ledger.energy[k] = modal_energy(traj.snapshots[k], beta);
    diss[k] = modal_dissipation(traj.snapshots[k], beta);
  }

  const double e0 = ledger.energy[0];
  const double t0 = ledger.times[0];
  double diss_cum = 0.0, energy_cum = 0.0;
  for (size_t k = 0; k < K; ++k) {
    if (k > 0) {
      const double dt = ledger.times[k] - ledger.times[k - 1];
      diss_cum += 0.5 * dt * (diss[k] + diss[k - 1]);
      energy_cum += 0.5 * dt * (ledger.energy[k] + ledger.energy[k - 1]);
    }
    ledger.dissipation_cum[k] = diss_cum;
    ledger.balance_residual[k] =
        std::abs(0.5 * ledger.energy[k] + alpha * diss_cum - 0.5 * e0 -
                 beta * energy_cum);
    ledger.gronwall_margin[k] =
        e0 > 0.0 ? ledger.energy[k] *
                           std::exp(-2.0 * (beta - alpha) *
                                    (ledger.times[k] - t0)) /
                           e0 -
                       1.0
                 : 0.0;
  }
  return ledger;
}

std::vector<double> pde_residual(const Trajectory& traj,
                                 const ModelParams& p) {
  const size_t K = traj.snapshots.size();
  if (K < 3) throw DomainError("pde_residual: need at least three snapshots");
  const double dt = traj.snapshots[1].time() - traj.snapshots[0].time();
  for (size_t k = 1; k < K; ++k) {
    const double step = traj.snapshots[k].time() - traj.snapshots[k - 1].time();
    if (std::abs(step - dt) > 1e-9 * std::max(std::abs(dt), 1.0))
      throw SpacingError("pde_residual: snapshots not uniformly spaced");
  }

  const GridSpec& g = traj.snapshots[0].grid();
  std::vector<double> out;
  out.reserve(K - 2);
  for (size_t k = 1; k + 1 < K; ++k) {
    const SpectralField& u = traj.snapshots[k];
    const SpectralField a = nonlinear_term(u);
    const double t = u.time();
    const double eb = std::exp(p.beta * t);
    const double ebm = std::exp(p.beta * traj.snapshots[k - 1].time());
    const double ebp = std::exp(p.beta * traj.snapshots[k + 1].time());

    double res2 = 0.0, scale2 = 0.0;
    for (int n = 1; n <= g.ny; ++n) {
      const double n2 = static_cast<double>(n) * n;
      for (int m = -g.mmax(); m <= g.mmax(); ++m) {
        const Complex v = eb * u.at(m, n);
        const Complex vdot = (ebp * traj.snapshots[k + 1].at(m, n) -
                              ebm * traj.snapshots[k - 1].at(m, n)) /
                             (2.0 * dt);
        const double m3 = static_cast<double>(m) * m * m;
        const Complex r = -n2 * vdot +
                          Complex(-p.alpha * n2 * n2 + p.beta * n2,
                                  p.gamma * m3) *
                              v +
                          n2 * eb * eb * a.at(m, n);
        res2 += std::norm(r);
        scale2 += n2 * n2 * std::norm(v);
      }
    }
    const double scale = std::sqrt(4.0 * kPi * kPi * scale2);
    const double res = std::sqrt(4.0 * kPi * kPi * res2);
    out.push_back(scale > 0.0 ? res / scale : 0.0);
  }
  return out;
}

double hs0b_norm(const SpectralField& c, double s, double b) {
  const GridSpec& g = c.grid();
  double sum = 0.0;
  for (int n = 1; n <= g.ny; ++n) {
    const double nw = std::pow(static_cast<double>(n), 4.0 * b - 2.0);
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      const double rho = std::pow(static_cast<double>(n + std::abs(m)), 2.0 * s);
      sum += nw * rho * std::norm(c.at(m, n));
    }
  }
  return std::sqrt(2.0 * sum);  // stored modes carry their n < 0 mirrors
}

namespace {

// Discrete-time Fourier transform of one sampled mode at a single tau.
Complex dtft(const ModeHistory& mode, double t_begin, double dt, double tau) {
  Complex acc(0.0, 0.0);
  for (size_t k = 0; k < mode.samples.size(); ++k) {
    const double t = t_begin + k * dt;
    acc += mode.samples[k] * std::polar(1.0, -t * tau);
  }
  return dt * acc;
}

}  // namespace

double tsb_norm(const CoefficientHistory& theta, const WeightSpec& spec,
                const CutoffSpec& cutoff, const ModelParams& p) {
  if (!(theta.dt > 0.0)) throw DomainError("tsb_norm: dt must be > 0");
  const double nyquist = kPi / theta.dt;
  const double dtau = (kPi / (2.0 * cutoff.delta)) / 16.0;

  double total = 0.0;
  for (const auto& mode : theta.modes) {
    if (mode.n < 1) throw DomainError("tsb_norm: modes must have n >= 1");
    if (mode.samples.empty()) continue;

    const double l = dispersion_symbol(mode.m, mode.n, p);
    const double rho =
        std::pow(static_cast<double>(mode.n + std::abs(mode.m)), 2.0 * spec.s);
    const double n2 = static_cast<double>(mode.n) * mode.n;
    auto weight = [&](double tau) {
      return rho * std::pow(n2 + std::abs(tau - l), 2.0 * spec.b);
    };
    auto integrand = [&](double tau) {
      return weight(tau) * std::norm(dtft(mode, theta.t_begin, theta.dt, tau));
    };

    // Coarse probe of the admissible band: locate the peak and check that
    // the sampling resolves the transform (no leakage at the band edge).
    const int probes = 2048;
    double fmax = 0.0, gmax = 0.0, tau_peak = 0.0;
    for (int j = 0; j <= probes; ++j) {
      const double tau = -nyquist + 2.0 * nyquist * j / probes;
      const double fa = std::abs(dtft(mode, theta.t_begin, theta.dt, tau));
      fmax = std::max(fmax, fa);
      const double gval = weight(tau) * fa * fa;
      if (gval > gmax) {
        gmax = gval;
        tau_peak = tau;
      }
    }
    if (fmax == 0.0) continue;
    const double edge =
        std::max(std::abs(dtft(mode, theta.t_begin, theta.dt, -nyquist)),
                 std::abs(dtft(mode, theta.t_begin, theta.dt, nyquist)));
    if (edge > 1e-6 * fmax)
      throw ResolutionError("tsb_norm: spectral leakage at the sampling "
                            "Nyquist frequency; raise sample_count");
    if (std::abs(l) <= nyquist) {
      const double gl = integrand(l);
      if (gl > gmax) {
        gmax = gl;
        tau_peak = l;
      }
    }

    // Trapezoid march outward from the peak until the integrand has decayed.
    double contribution = 0.0;
    for (int dir = -1; dir <= 1; dir += 2) {
      double tau = tau_peak;
      double g_prev = integrand(tau);
      int below = 0;
      long steps = 0;
      while (true) {
        tau += dir * dtau;
        if (std::abs(tau) > nyquist) {
          if (g_prev > 1e-10 * gmax)
            throw ResolutionError(
                "tsb_norm: integrand not decayed at the Nyquist edge");
          break;
        }
        const double gval = integrand(tau);
        contribution += 0.5 * (g_prev + gval) * dtau;
        gmax = std::max(gmax, gval);
        g_prev = gval;
        below = gval < 1e-12 * gmax ? below + 1 : 0;
        if (below >= 64) break;
        if (++steps > (1L << 22))
          throw ResolutionError("tsb_norm: tau integral failed to decay");
      }
    }
    total += 2.0 * contribution;  // n < 0 mirror multiplicity
  }
  return std::sqrt(total);
}

}  // namespace hallbraid
