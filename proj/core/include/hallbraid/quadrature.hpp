#ifndef HALLBRAID_QUADRATURE_HPP
#define HALLBRAID_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "hallbraid/errors.hpp"

namespace hallbraid {

struct QuadratureStats {
  long evaluations = 0;
  int panels = 0;
  double error_estimate = 0.0;
};

// Globally adaptive Gauss-Kronrod 7/15 integration over the panels delimited
// by `breakpoints` (sorted, at least two entries).  Integrands are expected
// to be smooth inside each initial panel; put kinks on panel boundaries.
// Throws QuadratureError when the panel budget is exhausted before the error
// estimate drops below max(abs_tol, rel_tol * |I|).
double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breakpoints,
                          double rel_tol = 1e-9, double abs_tol = 0.0,
                          int max_panels = 2000,
                          QuadratureStats* stats = nullptr);

// Closed-form power tail: int_{u0}^inf (u^2 + w)^{-p} du by binomial series,
// valid for |w| < u0^2 (fast for |w| <= u0^2/2).
double power_tail_sym(double u0, double w, double p);

// int_R^inf (x + A)^{-p} (x + B)^{-p} dx, requiring R + A > 0, R + B > 0 and
// the series condition above after centering.
double pair_power_tail(double R, double A, double B, double p);

// Full-line integral of (a1 + |x - c1|)^{-p1} (a2 + |x - c2|)^{-p2}:
// adaptive quadrature between the kinks, series tails beyond them.
// Requires a1, a2 > 0 and p1 + p2 > 1.
double two_kink_integral(double a1, double c1, double p1, double a2, double c2,
                         double p2, double rel_tol = 1e-9,
                         QuadratureStats* stats = nullptr);

}  // namespace hallbraid

#endif
