#ifndef HALLBRAID_MODEL_HPP
#define HALLBRAID_MODEL_HPP

#include "hallbraid/errors.hpp"

namespace hallbraid {

// Physical parameters: alpha > 0 is the diffusion strength in y, beta the
// linear forcing, gamma != 0 the dispersion strength in x.
struct ModelParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;

  ModelParams() = default;

  ModelParams(double alpha_, double beta_, double gamma_)
      : alpha(alpha_), beta(beta_), gamma(gamma_) {
    if (!(alpha > 0.0)) throw DomainError("ModelParams: alpha must be > 0");
    if (gamma == 0.0) throw DomainError("ModelParams: gamma must be nonzero");
  }
};

// Dispersion relation of the linearized equation: the x-phase speed of mode
// (m,n) is gamma*m^3/n^2, odd in m and even in n.
inline double dispersion_symbol(int m, int n, const ModelParams& p) {
  if (n == 0) throw DomainError("dispersion_symbol: n must be nonzero");
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return p.gamma * md * md * md / (nd * nd);
}

}  // namespace hallbraid

#endif
