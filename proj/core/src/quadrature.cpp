#include "hallbraid/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hallbraid {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK values).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b, long* evals) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double gk = 0.0, g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kXgk[i];
    double fsum;
    if (i == 7) {
      fsum = f(mid);
      *evals += 1;
    } else {
      fsum = f(mid - dx) + f(mid + dx);
      *evals += 2;
    }
    gk += kWgk[i] * fsum;
    // The embedded Gauss points are the odd-indexed abscissae (the midpoint
    // included).
    if (i % 2 == 1) g += kWg[i / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = gk * half;
  p.error = std::abs((gk - g) * half);
  return p;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breakpoints,
                          double rel_tol, double abs_tol, int max_panels,
                          QuadratureStats* stats) {
  if (breakpoints.size() < 2)
    throw QuadratureError("integrate_adaptive: need at least one panel");
  long evals = 0;
  std::vector<Panel> panels;
  panels.reserve(64);
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw QuadratureError("integrate_adaptive: breakpoints not increasing");
    panels.push_back(
        evaluate_panel(f, breakpoints[i], breakpoints[i + 1], &evals));
  }

  while (true) {
    double total = 0.0, err = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      err += p.error;
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total)) ||
        !std::isfinite(total)) {
      if (!std::isfinite(total))
        throw QuadratureError("integrate_adaptive: non-finite integrand");
      if (stats) {
        stats->evaluations = evals;
        stats->panels = static_cast<int>(panels.size());
        stats->error_estimate = err;
      }
      return total;
    }
    if (static_cast<int>(panels.size()) >= max_panels)
      throw QuadratureError("integrate_adaptive: panel budget exhausted");
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;
    const Panel old = panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    panels[worst] = evaluate_panel(f, old.a, mid, &evals);
    panels.push_back(evaluate_panel(f, mid, old.b, &evals));
  }
}

double power_tail_sym(double u0, double w, double p) {
  if (!(u0 > 0.0) || !(std::abs(w) < 0.81 * u0 * u0))
    throw QuadratureError("power_tail_sym: series condition violated");
  const double ratio = w / (u0 * u0);
  const double upow = std::pow(u0, 1.0 - 2.0 * p);
  double coeff = 1.0;  // binom(-p,k) * (w/u0^2)^k, built incrementally
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double term = coeff * upow / (2.0 * p + 2.0 * k - 1.0);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    coeff *= -(p + k) / (k + 1.0) * ratio;
  }
  throw QuadratureError("power_tail_sym: series did not converge");
}

double pair_power_tail(double R, double A, double B, double p) {
  const double u0 = R + 0.5 * (A + B);
  const double e = 0.5 * (A - B);
  return power_tail_sym(u0, -e * e, p);
}

double two_kink_integral(double a1, double c1, double p1, double a2, double c2,
                         double p2, double rel_tol, QuadratureStats* stats) {
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw QuadratureError("two_kink_integral: levels must be positive");
  if (!(p1 + p2 > 1.0))
    throw QuadratureError("two_kink_integral: tails not integrable");

  auto f = [&](double x) {
    return std::pow(a1 + std::abs(x - c1), -p1) *
           std::pow(a2 + std::abs(x - c2), -p2);
  };

  const double spread = std::abs(c1 - c2);
  const double W = spread + a1 + a2 + 8.0;
  const double lo = std::min(c1, c2) - W;
  const double hi = std::max(c1, c2) + W;

  std::vector<double> pts{lo, std::min(c1, c2)};
  if (c1 != c2) pts.push_back(std::max(c1, c2));
  pts.push_back(hi);

  double middle = integrate_adaptive(f, pts, rel_tol, 0.0, 2000, stats);

  double right, left;
  if (p1 == p2) {
    right = pair_power_tail(hi, a1 - c1, a2 - c2, p1);
    left = pair_power_tail(-lo, a1 + c1, a2 + c2, p1);
  } else {
    // Distinct exponents: fall back to a substituted quadrature on the
    // compactified tails.
    auto right_f = [&](double t) {
      const double x = hi + t / (1.0 - t);
      const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
      return f(x) * jac;
    };
    auto left_f = [&](double t) {
      const double x = lo - t / (1.0 - t);
      const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
      return f(x) * jac;
    };
    right = integrate_adaptive(right_f, {0.0, 0.999999}, rel_tol, 0.0, 2000);
    left = integrate_adaptive(left_f, {0.0, 0.999999}, rel_tol, 0.0, 2000);
  }
  return middle + right + left;
}

}  // namespace hallbraid
