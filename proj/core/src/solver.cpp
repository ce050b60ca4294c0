#include "hallbraid/solver.hpp"

#include <algorithm>
#include <cmath>

namespace hallbraid {

namespace {

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, with series fallback
// near z = 0 to avoid cancellation.
Complex phi1(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex sum(1.0, 0.0), term(1.0, 0.0);
    for (int k = 1; k < 24; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
      if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex sum(0.5, 0.0), term(0.5, 0.0);
    for (int k = 1; k < 24; ++k) {
      term *= z / static_cast<double>(k + 2);
      sum += term;
      if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

double geometric_mean_ratio(const std::vector<double>& residuals) {
  double log_sum = 0.0;
  int count = 0;
  for (size_t i = 1; i < residuals.size(); ++i) {
    if (residuals[i - 1] <= 0.0 || residuals[i] <= 0.0) break;
    log_sum += std::log(residuals[i] / residuals[i - 1]);
    ++count;
  }
  return count > 0 ? std::exp(log_sum / count) : 0.0;
}

struct WindowAttempt {
  bool converged = false;
  std::vector<SpectralField> nodes;
  PicardReport report;
};

WindowAttempt run_window(const SpectralField& c0, const ModelParams& p,
                         const SolverConfig& cfg, double delta) {
  const GridSpec& g = c0.grid();
  const int K = cfg.nodes_per_window;
  const double h = delta / (K - 1);
  const double t0 = c0.time();
  const size_t nmodes = c0.data().size();

  // Per-mode propagator and piecewise-linear kernel weights.
  std::vector<Complex> eh(nmodes), w_left(nmodes), w_right(nmodes);
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      const Complex lambda(p.alpha * n * n, -dispersion_symbol(m, n, p));
      const Complex z = -lambda * h;
      const Complex i0 = h * phi1(z);
      const Complex i1 = h * h * (phi1(z) - phi2(z));
      const size_t idx = c0.index(m, n);
      eh[idx] = std::exp(z);
      w_left[idx] = i1 / h;
      w_right[idx] = i0 - i1 / h;
    }
  }

  // Initial iterate: the pure linear evolution of c0.
  std::vector<SpectralField> lin(K);
  for (int k = 0; k < K; ++k) lin[k] = linear_propagate(c0, k * h, p);
  std::vector<SpectralField> theta = lin;

  const SpectralField a0 = nonlinear_term(c0);  // node 0 never changes
  WindowAttempt out;
  out.report.delta = delta;

  std::vector<SpectralField> ghist(K, SpectralField(g));
  for (int sweep = 1; sweep <= cfg.picard_max_iter; ++sweep) {
    for (int k = 0; k < K; ++k) {
      ghist[k] = (k == 0) ? a0 : nonlinear_term(theta[k]);
      const double ebs = std::exp(p.beta * (t0 + k * h));
      for (auto& v : ghist[k].data()) v *= ebs;
    }

    double residual = 0.0;
    std::vector<SpectralField> next(K);
    next[0] = theta[0];
    std::vector<Complex> memory(nmodes, Complex(0.0, 0.0));
    for (int k = 1; k < K; ++k) {
      next[k] = lin[k];
      auto& dst = next[k].data();
      const auto& gl = ghist[k - 1].data();
      const auto& gr = ghist[k].data();
      const auto& prev = theta[k].data();
      for (size_t idx = 0; idx < nmodes; ++idx) {
        memory[idx] = eh[idx] * memory[idx] + w_left[idx] * gl[idx] +
                      w_right[idx] * gr[idx];
        dst[idx] += memory[idx];
        residual = std::max(residual, std::abs(dst[idx] - prev[idx]));
      }
      next[k] = enforce_symmetry(std::move(next[k]));
    }
    theta = std::move(next);

    out.report.residual_history.push_back(residual);
    out.report.iterations = sweep;
    if (!std::isfinite(residual)) break;
    if (residual <= cfg.picard_tol) {
      out.converged = true;
      break;
    }
  }

  out.report.contraction_ratio =
      geometric_mean_ratio(out.report.residual_history);
  out.nodes = std::move(theta);
  return out;
}

}  // namespace

SpectralField linear_propagate(const SpectralField& c, double dt,
                               const ModelParams& p) {
  if (dt < 0.0)
    throw BackwardTimeError("linear_propagate: dt must be >= 0");
  const GridSpec& g = c.grid();
  SpectralField out(g, c.time() + dt);
  for (int n = 1; n <= g.ny; ++n) {
    const double decay = std::exp(-p.alpha * n * n * dt);
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      const double phase = dispersion_symbol(m, n, p) * dt;
      out.at(m, n) = c.at(m, n) * std::polar(decay, phase);
    }
  }
  return out;
}

std::pair<std::vector<SpectralField>, PicardReport> picard_window(
    const SpectralField& c0, const ModelParams& p, const SolverConfig& cfg) {
  cfg.validate();
  require_symmetry(c0);

  double delta = cfg.window;
  const int max_halvings = cfg.adapt_window ? 20 : 0;
  WindowAttempt attempt;
  for (int halving = 0; halving <= max_halvings; ++halving) {
    attempt = run_window(c0, p, cfg, delta);
    if (attempt.converged)
      return {std::move(attempt.nodes), std::move(attempt.report)};
    delta *= 0.5;
  }
  throw ContractionFailure(
      "picard_window: no contraction after " +
          std::to_string(attempt.report.iterations) + " iterations (delta " +
          std::to_string(attempt.report.delta) + ")",
      attempt.report);
}

Trajectory solve(const SpectralField& c0, double t_end, const ModelParams& p,
                 const SolverConfig& cfg) {
  cfg.validate();
  if (!(t_end > c0.time()))
    throw DomainError("solve: t_end must exceed the initial time");

  Trajectory traj;
  traj.params = p;
  traj.config = cfg;
  traj.snapshots.push_back(enforce_symmetry(c0));

  const double horizon = t_end - c0.time();
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  SpectralField current = traj.snapshots.back();
  while (t_end - current.time() > eps) {
    SolverConfig wcfg = cfg;
    wcfg.window = std::min(cfg.window, t_end - current.time());
    try {
      auto [nodes, report] = picard_window(current, p, wcfg);
      traj.contraction_log.push_back(
          {report.delta, report.iterations,
           report.residual_history.empty() ? 0.0
                                           : report.residual_history.back(),
           report.contraction_ratio});
      if (cfg.record_interior) {
        for (size_t k = 1; k + 1 < nodes.size(); ++k)
          traj.snapshots.push_back(nodes[k]);
      }
      traj.snapshots.push_back(nodes.back());
      current = traj.snapshots.back();
    } catch (ContractionFailure& failure) {
      failure.partial = std::move(traj);
      throw;
    }
    if (traj.contraction_log.size() >
        1000000 + static_cast<size_t>(horizon / cfg.window))
      throw Error("solve: window count runaway");
  }
  return traj;
}

SpectralField oracle_step(const SpectralField& c, double dt,
                          const ModelParams& p, int substeps) {
  if (dt < 0.0) throw BackwardTimeError("oracle_step: dt must be >= 0");
  if (substeps < 1) throw DomainError("oracle_step: substeps must be >= 1");
  const GridSpec& g = c.grid();
  const double h = dt / substeps;
  if (p.alpha * g.ny * g.ny * h > 1.0 + 1e-12)
    throw StiffnessError(
        "oracle_step: alpha*ny^2*dt/substeps exceeds 1; raise substeps");

  const size_t nmodes = c.data().size();
  std::vector<Complex> e_half(nmodes), e_full(nmodes);
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      const Complex lambda(p.alpha * n * n, -dispersion_symbol(m, n, p));
      const size_t idx = c.index(m, n);
      e_half[idx] = std::exp(-lambda * (0.5 * h));
      e_full[idx] = std::exp(-lambda * h);
    }
  }

  auto rhs = [&](double t, const SpectralField& u) {
    SpectralField a = nonlinear_term(u);
    const double ebs = std::exp(p.beta * t);
    for (auto& v : a.data()) v *= ebs;
    return a;
  };

  SpectralField u = c;
  for (int step = 0; step < substeps; ++step) {
    const double t = c.time() + step * h;
    const SpectralField k1 = rhs(t, u);

    SpectralField stage(g, t + 0.5 * h);
    for (size_t i = 0; i < nmodes; ++i)
      stage.data()[i] = e_half[i] * (u.data()[i] + 0.5 * h * k1.data()[i]);
    const SpectralField k2 = rhs(t + 0.5 * h, stage);

    for (size_t i = 0; i < nmodes; ++i)
      stage.data()[i] = e_half[i] * u.data()[i] + 0.5 * h * k2.data()[i];
    const SpectralField k3 = rhs(t + 0.5 * h, stage);

    stage.set_time(t + h);
    for (size_t i = 0; i < nmodes; ++i)
      stage.data()[i] = e_full[i] * u.data()[i] + e_half[i] * h * k3.data()[i];
    const SpectralField k4 = rhs(t + h, stage);

    SpectralField next(g, t + h);
    for (size_t i = 0; i < nmodes; ++i) {
      next.data()[i] =
          e_full[i] * u.data()[i] +
          (h / 6.0) * (e_full[i] * k1.data()[i] +
                       2.0 * e_half[i] * (k2.data()[i] + k3.data()[i]) +
                       k4.data()[i]);
    }
    u = std::move(next);
  }
  return u;
}

PhysicalField gauge_transform(const PhysicalField& f, double c0_mean,
                              double t) {
  if (c0_mean == 0.0) return f;
  SpectralField c = forward_transform(f);
  const GridSpec& g = c.grid();
  for (int n = 1; n <= g.ny; ++n)
    for (int m = -g.mmax(); m <= g.mmax(); ++m)
      c.at(m, n) *= std::polar(1.0, -2.0 * c0_mean * t * m);
  PhysicalField out = inverse_transform(c);
  for (auto& v : out.data()) v += c0_mean;
  return out;
}

}  // namespace hallbraid
