#ifndef HALLBRAID_TRANSFORMS_HPP
#define HALLBRAID_TRANSFORMS_HPP

#include "hallbraid/model.hpp"
#include "hallbraid/spectral_field.hpp"

namespace hallbraid {

// Largest violation of the conjugate pairing u(-m,n) = conj(u(m,n)) over the
// stored lattice.
double symmetry_defect(const SpectralField& c);

// Throws SymmetryError when the defect exceeds rel_tol * max|u|.
void require_symmetry(const SpectralField& c, double rel_tol = 1e-12);

// Orthogonal projection onto the symmetric subspace,
//   u(m,n)  <- (u(m,n) + conj(u(-m,n))) / 2,
// applied pairwise.  Idempotent; a symmetric field passes through unchanged
// bit for bit.
SpectralField enforce_symmetry(SpectralField c);

// Projection onto the Fourier-cosine basis.  The input must have zero y-mean
// in every x-column (within mean_rel_tol * max|f|); otherwise MeanModeError.
SpectralField forward_transform(const PhysicalField& f,
                                double mean_rel_tol = 1e-10);

// Reconstruction on the collocation grid.  The two-argument overload applies
// the exp(beta*t) physical prefactor; the coefficient-space overload omits
// it.  Throws SymmetryError when the input violates the conjugate pairing.
PhysicalField inverse_transform(const SpectralField& c);
PhysicalField inverse_transform(const SpectralField& c, const ModelParams& p);

// Quadratic interaction term A(m,n) = -i*m * sum u(m',n') u(m-m',n-n') over
// the n' != 0, n' != n pairs, evaluated pseudospectrally on the padded grid
// (exact for the retained band) and Galerkin-truncated back to it.
SpectralField nonlinear_term(const SpectralField& c);

}  // namespace hallbraid

#endif
