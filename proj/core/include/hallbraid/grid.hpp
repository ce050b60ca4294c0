#ifndef HALLBRAID_GRID_HPP
#define HALLBRAID_GRID_HPP

#include <cmath>
#include <numbers>

#include "hallbraid/errors.hpp"

namespace hallbraid {

// Mode layout for fields on the strip [0,2*pi) x [0,pi].
//
// x carries complex exponentials exp(i*m*x) with m in [-nx/2, nx/2-1]; the
// unpaired bin m = -nx/2 has no conjugate partner and is kept identically
// zero, so the retained band is |m| <= nx/2 - 1.  y carries a cosine series
// cos(n*y) with n in [1, ny]; the n = 0 (y-mean) line is excluded from the
// coefficient lattice.  Physical samples live at x_i = 2*pi*i/nx and at the
// cell midpoints y_j = pi*(j+1/2)/(ny+1); on that grid cos(n*y), n >= 1, has
// an exactly zero column mean and the discrete cosine transform is an exact
// orthogonal change of basis.
//
// padded_nx/padded_ny are the transform sizes used when forming quadratic
// products.  The 3/2 rule is exact for the exponential direction; the cosine
// direction reflects aliases instead of wrapping them, which costs one more
// frequency, hence the default 3*ny/2 + 1.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  int padded_nx = 0;
  int padded_ny = 0;

  GridSpec() = default;

  GridSpec(int nx_, int ny_, int padded_nx_ = 0, int padded_ny_ = 0)
      : nx(nx_), ny(ny_), padded_nx(padded_nx_), padded_ny(padded_ny_) {
    if (padded_nx == 0) padded_nx = (3 * nx) / 2;
    if (padded_ny == 0) padded_ny = (3 * ny) / 2 + 1;
    validate();
  }

  void validate() const {
    if (nx < 4 || ny < 4) throw ShapeError("GridSpec: nx, ny must be >= 4");
    if (nx % 2 != 0 || ny % 2 != 0)
      throw ShapeError("GridSpec: nx, ny must be even");
    if (2 * padded_nx < 3 * nx)
      throw ShapeError("GridSpec: padded_nx must be >= 3*nx/2");
    if (2 * padded_ny < 3 * ny)
      throw ShapeError("GridSpec: padded_ny must be >= 3*ny/2");
  }

  // Largest retained |m|.
  int mmax() const { return nx / 2 - 1; }
  // Number of retained m values, m in [-mmax, mmax].
  int num_m() const { return nx - 1; }
  // Number of retained cosine frequencies, n in [1, ny].
  int num_n() const { return ny; }
  // Physical sample counts.
  int x_points() const { return nx; }
  int y_points() const { return ny + 1; }

  double x_node(int i) const {
    return 2.0 * std::numbers::pi * static_cast<double>(i) / nx;
  }
  double y_node(int j) const {
    return std::numbers::pi * (static_cast<double>(j) + 0.5) / y_points();
  }

  bool operator==(const GridSpec& o) const {
    return nx == o.nx && ny == o.ny && padded_nx == o.padded_nx &&
           padded_ny == o.padded_ny;
  }
};

}  // namespace hallbraid

#endif
