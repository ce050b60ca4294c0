#ifndef HALLBRAID_SOLVER_HPP
#define HALLBRAID_SOLVER_HPP

#include <utility>
#include <vector>

#include "hallbraid/model.hpp"
#include "hallbraid/spectral_field.hpp"
#include "hallbraid/transforms.hpp"

namespace hallbraid {

struct SolverConfig {
  double window = 1.0 / 64.0;   // delta: length of one fixed-point window
  int nodes_per_window = 5;     // quadrature nodes for the memory integral
  double picard_tol = 1e-12;    // sup over modes and nodes of |delta u|
  int picard_max_iter = 25;
  bool adapt_window = true;     // halve delta until contraction is observed
  bool record_interior = false; // keep interior window nodes in the trajectory

  void validate() const {
    if (!(window > 0.0)) throw DomainError("SolverConfig: window must be > 0");
    if (nodes_per_window < 2)
      throw DomainError("SolverConfig: nodes_per_window must be >= 2");
    if (!(picard_tol > 0.0))
      throw DomainError("SolverConfig: picard_tol must be > 0");
    if (picard_max_iter < 1)
      throw DomainError("SolverConfig: picard_max_iter must be >= 1");
  }
};

struct PicardReport {
  double delta = 0.0;       // window length actually used (after adaptation)
  int iterations = 0;
  std::vector<double> residual_history;
  // Geometric mean of successive residual ratios; 0 when fewer than two
  // sweeps were needed.
  double contraction_ratio = 0.0;
};

struct WindowLog {
  double delta = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  double contraction_ratio = 0.0;
};

struct Trajectory {
  std::vector<SpectralField> snapshots;
  ModelParams params;
  SolverConfig config;
  std::vector<WindowLog> contraction_log;
};

// Thrown when a window fails to contract within the iteration budget (and,
// if adaptation is on, after the halving budget is exhausted).  solve()
// attaches the trajectory accumulated so far.
struct ContractionFailure : Error {
  ContractionFailure(const std::string& what, PicardReport report_)
      : Error(what), report(std::move(report_)) {}
  PicardReport report;
  Trajectory partial;  // empty unless thrown from solve()
};

// Semigroup of the linearized equation: multiplies each coefficient by
// exp((-alpha*n^2 + i*l(m,n)) * dt).  Forward time only.
SpectralField linear_propagate(const SpectralField& c, double dt,
                               const ModelParams& p);

// Fixed-point iteration of the memory-integral equation on one window
// [t0, t0 + delta], t0 = c0.time().  Returns the node states (including the
// initial node) and the iteration record.  The integral of the exponential
// kernel against the interaction history is evaluated with exact
// piecewise-linear (phi-function) weights.
std::pair<std::vector<SpectralField>, PicardReport> picard_window(
    const SpectralField& c0, const ModelParams& p, const SolverConfig& cfg);

// Chains windows until t_end, re-centering the integral equation at each
// window boundary.
Trajectory solve(const SpectralField& c0, double t_end, const ModelParams& p,
                 const SolverConfig& cfg);

// Independent integrating-factor classical RK4 reference integrator, for
// cross-validation of the windowed solver.  Requires the stiffest retained
// mode to be resolved: alpha*ny^2*(dt/substeps) <= 1.
SpectralField oracle_step(const SpectralField& c, double dt,
                          const ModelParams& p, int substeps);

// Reconstructs the mean-C0 solution from a zero-mean one: shifts x by
// -2*C0*t (phase exp(-2i*C0*t*m) per mode) and adds the offset C0.
PhysicalField gauge_transform(const PhysicalField& f, double c0_mean,
                              double t);

}  // namespace hallbraid

#endif
