#ifndef HALLBRAID_SPECTRAL_FIELD_HPP
#define HALLBRAID_SPECTRAL_FIELD_HPP

#include <complex>
#include <vector>

#include "hallbraid/grid.hpp"

namespace hallbraid {

using Complex = std::complex<double>;

// Coefficient-space state of the field.  Stored entries are u(m,n) for
// m in [-mmax, mmax] and n in [1, ny]; the n < 0 half of the lattice is
// implied by u(m,-n) = u(m,n) and never stored.  Realness of the physical
// field corresponds to the pairing u(-m,n) = conj(u(m,n)).
//
// The coefficients are the renormalized ones: the physical field carries an
// additional exp(beta*t) prefactor that is applied only on reconstruction.
// With the single-sided storage the physical field reads
//
//   u(x,y) = exp(beta*t) * sum_{m,n>=1} 2*u(m,n)*cos(n*y)*exp(i*m*x),
//
// so a pure cos(y) field of unit amplitude is stored as u(0,1) = 1/2.
class SpectralField {
 public:
  SpectralField() = default;

  explicit SpectralField(const GridSpec& grid, double time = 0.0)
      : grid_(grid), time_(time),
        coeffs_(static_cast<size_t>(grid.num_m()) * grid.num_n(),
                Complex(0.0, 0.0)) {}

  const GridSpec& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  Complex& at(int m, int n) { return coeffs_[index(m, n)]; }
  const Complex& at(int m, int n) const { return coeffs_[index(m, n)]; }

  // Value on the full lattice, reaching into the implied n < 0 half.
  Complex lattice_value(int m, int n) const {
    if (n == 0) return Complex(0.0, 0.0);
    int na = n < 0 ? -n : n;
    if (na > grid_.ny || m < -grid_.mmax() || m > grid_.mmax())
      return Complex(0.0, 0.0);
    return at(m, na);
  }

  std::vector<Complex>& data() { return coeffs_; }
  const std::vector<Complex>& data() const { return coeffs_; }

  size_t index(int m, int n) const {
    return static_cast<size_t>(n - 1) * grid_.num_m() +
           static_cast<size_t>(m + grid_.mmax());
  }

  double max_abs() const {
    double mx = 0.0;
    for (const auto& c : coeffs_) mx = std::max(mx, std::abs(c));
    return mx;
  }

 private:
  GridSpec grid_;
  double time_ = 0.0;
  std::vector<Complex> coeffs_;
};

// Real samples u(x_i, y_j) on the grid's collocation points, x-major.
class PhysicalField {
 public:
  PhysicalField() = default;

  explicit PhysicalField(const GridSpec& grid, double time = 0.0)
      : grid_(grid), time_(time),
        values_(static_cast<size_t>(grid.x_points()) * grid.y_points(), 0.0) {}

  const GridSpec& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double& at(int i, int j) {
    return values_[static_cast<size_t>(i) * grid_.y_points() + j];
  }
  double at(int i, int j) const {
    return values_[static_cast<size_t>(i) * grid_.y_points() + j];
  }

  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double max_abs() const {
    double mx = 0.0;
    for (double v : values_) mx = std::max(mx, std::abs(v));
    return mx;
  }

 private:
  GridSpec grid_;
  double time_ = 0.0;
  std::vector<double> values_;
};

}  // namespace hallbraid

#endif
