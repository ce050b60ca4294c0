#ifndef HALLBRAID_DIAGNOSTICS_HPP
#define HALLBRAID_DIAGNOSTICS_HPP

#include <vector>

#include "hallbraid/solver.hpp"
#include "hallbraid/weight_spec.hpp"

namespace hallbraid {

// Energy bookkeeping along a trajectory.  All entries refer to the physical
// field, i.e. they include the exp(beta*t) reconstruction prefactor; energy
// is the unhalved squared L2 norm.
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> energy;            // |u|_L2^2
  std::vector<double> dissipation_cum;   // int_0^t |u_y|_L2^2 ds (trapezoid)
  std::vector<double> balance_residual;  // defect of the energy identity
  std::vector<double> gronwall_margin;   // E(t) e^{-2(beta-alpha)t}/E(0) - 1
};

// Smooth time cutoff: phi = 1 on [-delta, delta], supported in
// (-2delta, 2delta), monotone on the shoulders.  The shoulder profile is the
// normalized incomplete integral of the bump exp(-1/(1-r^2)) over the
// transition band, fixed here once for reproducibility.
struct CutoffSpec {
  double delta = 0.0;
  int sample_count = 256;  // time grid resolution on (-2delta, 2delta)

  CutoffSpec() = default;
  CutoffSpec(double delta_, int sample_count_ = 256)
      : delta(delta_), sample_count(sample_count_) {
    if (!(delta > 0.0)) throw DomainError("CutoffSpec: delta must be > 0");
    if (sample_count < 8)
      throw DomainError("CutoffSpec: sample_count must be >= 8");
  }

  double phi(double t) const;
};

// Uniformly sampled per-mode coefficient history, compactly supported in
// time.  Modes are stored single-sided (n >= 1); the implied n < 0 mirror is
// counted with multiplicity 2 by the norm below.
struct ModeHistory {
  int m = 0;
  int n = 1;
  std::vector<Complex> samples;
};

struct CoefficientHistory {
  double t_begin = 0.0;
  double dt = 0.0;
  std::vector<ModeHistory> modes;
};

// int int u^2 dy dx over [0,2pi] x [0,pi], evaluated through the cosine-basis
// Parseval identity (exact on the collocation grid).
double l2_energy(const PhysicalField& f);

// |u_y|_L2^2, spectral differentiation then Parseval.
double dissipation(const PhysicalField& f);

EnergyLedger energy_balance(const Trajectory& traj);

// Per interior snapshot, the relative L2 defect of the equation with the
// time derivative of u_yy replaced by a centered difference and all space
// derivatives spectral.  Requires uniformly spaced snapshots.
std::vector<double> pde_residual(const Trajectory& traj,
                                 const ModelParams& p);

// Weighted coefficient Sobolev norm
//   |v|^2 = sum |n|^(4b-2) (|n|+|m|)^(2s) |v(m,n)|^2
// over the full lattice; stored single-sided modes count twice.
double hs0b_norm(const SpectralField& c, double s, double b);

// Space-time norm: sum over modes of int W(m,n)(tau; b) |F[theta](tau)|^2,
// with F the time Fourier transform of the sampled history (trapezoid
// approximation) and the tau integral truncated where the integrand falls
// below 1e-12 of its peak.  Returns the norm (square root of the sum).
// Throws ResolutionError when the sampling cannot support the transform.
double tsb_norm(const CoefficientHistory& theta, const WeightSpec& spec,
                const CutoffSpec& cutoff, const ModelParams& p);

}  // namespace hallbraid

#endif
