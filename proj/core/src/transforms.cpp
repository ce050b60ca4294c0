#include "hallbraid/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>

namespace hallbraid {

namespace {

// Cached 1-D FFTW plans, one per (kind, length).  Plans are created with
// FFTW_ESTIMATE (deterministic choice) and executed on their own aligned
// buffers under a global lock.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine engine;
    return engine;
  }

  // out[k] = sum_j in[j] * exp(sign * 2*pi*i*j*k/n), sign = -1 (forward)
  // or +1 (backward), unnormalized.
  void dft(int n, int sign, const Complex* in, Complex* out) {
    std::lock_guard<std::mutex> lock(mutex_);
    Slot& slot = complex_slot(n, sign);
    std::memcpy(slot.in, in, sizeof(Complex) * n);
    fftw_execute(slot.plan);
    std::memcpy(out, slot.out, sizeof(Complex) * n);
  }

  // REDFT10 (DCT-II): out[k] = 2 sum_j in[j] cos(pi*(j+1/2)*k/n).
  // REDFT01 (DCT-III): out[j] = in[0] + 2 sum_{k>=1} in[k] cos(pi*(j+1/2)*k/n).
  void dct(int n, fftw_r2r_kind kind, const double* in, double* out) {
    std::lock_guard<std::mutex> lock(mutex_);
    Slot& slot = real_slot(n, kind);
    std::memcpy(slot.rin, in, sizeof(double) * n);
    fftw_execute(slot.plan);
    std::memcpy(out, slot.rout, sizeof(double) * n);
  }

 private:
  struct Slot {
    fftw_plan plan = nullptr;
    Complex* in = nullptr;
    Complex* out = nullptr;
    double* rin = nullptr;
    double* rout = nullptr;
  };

  Slot& complex_slot(int n, int sign) {
    auto key = std::make_pair(n, sign);
    auto it = complex_plans_.find(key);
    if (it != complex_plans_.end()) return it->second;
    Slot slot;
    slot.in = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n));
    slot.out = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n));
    slot.plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(slot.in),
        reinterpret_cast<fftw_complex*>(slot.out),
        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    return complex_plans_.emplace(key, slot).first->second;
  }

  Slot& real_slot(int n, fftw_r2r_kind kind) {
    auto key = std::make_pair(n, static_cast<int>(kind));
    auto it = real_plans_.find(key);
    if (it != real_plans_.end()) return it->second;
    Slot slot;
    slot.rin = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    slot.rout = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    slot.plan = fftw_plan_r2r_1d(n, slot.rin, slot.rout, kind, FFTW_ESTIMATE);
    return real_plans_.emplace(key, slot).first->second;
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, Slot> complex_plans_;
  std::map<std::pair<int, int>, Slot> real_plans_;
};

}  // namespace

double symmetry_defect(const SpectralField& c) {
  const GridSpec& g = c.grid();
  double defect = 0.0;
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = 0; m <= g.mmax(); ++m) {
      Complex d = c.at(-m, n) - std::conj(c.at(m, n));
      defect = std::max(defect, std::abs(d));
    }
  }
  return defect;
}

void require_symmetry(const SpectralField& c, double rel_tol) {
  double scale = c.max_abs();
  if (scale == 0.0) return;
  double defect = symmetry_defect(c);
  if (defect > rel_tol * scale)
    throw SymmetryError("coefficient symmetry violated: defect " +
                        std::to_string(defect) + " vs scale " +
                        std::to_string(scale));
}

SpectralField enforce_symmetry(SpectralField c) {
  const GridSpec& g = c.grid();
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = 0; m <= g.mmax(); ++m) {
      Complex a = c.at(m, n);
      Complex b = c.at(-m, n);
      if (b == std::conj(a)) continue;  // preserve bits when already paired
      Complex p = 0.5 * (a + std::conj(b));
      c.at(m, n) = p;
      c.at(-m, n) = std::conj(p);
    }
  }
  return c;
}

SpectralField forward_transform(const PhysicalField& f, double mean_rel_tol) {
  const GridSpec& g = f.grid();
  const int nx = g.x_points();
  const int py = g.y_points();
  if (f.data().size() != static_cast<size_t>(nx) * py)
    throw ShapeError("forward_transform: sample count does not match grid");

  FftEngine& fft = FftEngine::instance();
  const double scale = f.max_abs();

  // DCT-II per column: cosine coefficients a[n](x_i), n = 0..py-1.
  std::vector<double> col(py), hat(py);
  std::vector<double> a(static_cast<size_t>(nx) * py);
  double worst_mean = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < py; ++j) col[j] = f.at(i, j);
    fft.dct(py, FFTW_REDFT10, col.data(), hat.data());
    double mean = hat[0] / (2.0 * py);
    worst_mean = std::max(worst_mean, std::abs(mean));
    for (int n = 0; n < py; ++n) a[static_cast<size_t>(i) * py + n] = hat[n] / py;
  }
  if (scale > 0.0 && worst_mean > mean_rel_tol * scale)
    throw MeanModeError("forward_transform: nonzero y-mean " +
                        std::to_string(worst_mean));

  // FFT per cosine frequency row, then keep the conjugate-complete band.
  SpectralField out(g, f.time());
  std::vector<Complex> row(nx), rowhat(nx);
  for (int n = 1; n <= g.ny; ++n) {
    for (int i = 0; i < nx; ++i)
      row[i] = Complex(a[static_cast<size_t>(i) * py + n], 0.0);
    fft.dft(nx, -1, row.data(), rowhat.data());
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      int k = m >= 0 ? m : m + nx;
      out.at(m, n) = 0.5 * rowhat[k] / static_cast<double>(nx);
    }
  }
  return out;
}

namespace {

PhysicalField inverse_impl(const SpectralField& c, double prefactor) {
  const GridSpec& g = c.grid();
  require_symmetry(c);
  const int nx = g.x_points();
  const int py = g.y_points();

  FftEngine& fft = FftEngine::instance();

  // Backward FFT per n: a[n](x_i) = sum_m 2 u(m,n) exp(i m x_i).
  std::vector<double> a(static_cast<size_t>(nx) * py, 0.0);
  std::vector<Complex> row(nx), rowval(nx);
  for (int n = 1; n <= g.ny; ++n) {
    std::fill(row.begin(), row.end(), Complex(0.0, 0.0));
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      int k = m >= 0 ? m : m + nx;
      row[k] = 2.0 * c.at(m, n);
    }
    fft.dft(nx, +1, row.data(), rowval.data());
    for (int i = 0; i < nx; ++i)
      a[static_cast<size_t>(i) * py + n] = rowval[i].real();
  }

  // DCT-III per column assembles sum_n a[n] cos(n y_j); the n = 0 slot of the
  // input is the (absent) mean.
  PhysicalField out(g, c.time());
  std::vector<double> coef(py), col(py);
  for (int i = 0; i < nx; ++i) {
    coef[0] = 0.0;
    for (int n = 1; n < py; ++n)
      coef[n] = 0.5 * a[static_cast<size_t>(i) * py + n];
    fft.dct(py, FFTW_REDFT01, coef.data(), col.data());
    for (int j = 0; j < py; ++j) out.at(i, j) = prefactor * col[j];
  }
  return out;
}

}  // namespace

PhysicalField inverse_transform(const SpectralField& c) {
  return inverse_impl(c, 1.0);
}

PhysicalField inverse_transform(const SpectralField& c, const ModelParams& p) {
  return inverse_impl(c, std::exp(p.beta * c.time()));
}

SpectralField nonlinear_term(const SpectralField& c) {
  const GridSpec& g = c.grid();
  require_symmetry(c);
  const int px = g.padded_nx;
  const int py = g.padded_ny;

  FftEngine& fft = FftEngine::instance();

  // Zero-padded cosine-coefficient layout a[kx][n], n = 0..py-1.
  std::vector<Complex> a(static_cast<size_t>(px) * py, Complex(0.0, 0.0));
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      int k = m >= 0 ? m : m + px;
      a[static_cast<size_t>(k) * py + n] = 2.0 * c.at(m, n);
    }
  }

  // To padded collocation values: DCT-III in y (real and imaginary parts
  // separately), then backward FFT in x.
  std::vector<double> re(py), im(py), vre(py), vim(py);
  for (int k = 0; k < px; ++k) {
    Complex* arow = &a[static_cast<size_t>(k) * py];
    for (int n = 0; n < py; ++n) {
      re[n] = n == 0 ? 0.0 : 0.5 * arow[n].real();
      im[n] = n == 0 ? 0.0 : 0.5 * arow[n].imag();
    }
    fft.dct(py, FFTW_REDFT01, re.data(), vre.data());
    fft.dct(py, FFTW_REDFT01, im.data(), vim.data());
    for (int j = 0; j < py; ++j) arow[j] = Complex(vre[j], vim[j]);
  }
  std::vector<Complex> colin(px), colout(px);
  for (int j = 0; j < py; ++j) {
    for (int k = 0; k < px; ++k) colin[k] = a[static_cast<size_t>(k) * py + j];
    fft.dft(px, +1, colin.data(), colout.data());
    // Square pointwise; the imaginary residue is roundoff only.
    for (int k = 0; k < px; ++k) {
      double w = colout[k].real();
      colin[k] = Complex(w * w, 0.0);
    }
    fft.dft(px, -1, colin.data(), colout.data());
    for (int k = 0; k < px; ++k)
      a[static_cast<size_t>(k) * py + j] = colout[k] / static_cast<double>(px);
  }
  for (int k = 0; k < px; ++k) {
    Complex* arow = &a[static_cast<size_t>(k) * py];
    for (int j = 0; j < py; ++j) {
      re[j] = arow[j].real();
      im[j] = arow[j].imag();
    }
    fft.dct(py, FFTW_REDFT10, re.data(), vre.data());
    fft.dct(py, FFTW_REDFT10, im.data(), vim.data());
    for (int n = 0; n < py; ++n)
      arow[n] = Complex(vre[n], vim[n]) / static_cast<double>(py);
  }

  // Galerkin truncation and the -i*m multiplier; the n' = n pairs would feed
  // the absent n = 0 line and are dropped structurally.
  SpectralField out(g, c.time());
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = -g.mmax(); m <= g.mmax(); ++m) {
      int k = m >= 0 ? m : m + px;
      Complex d = a[static_cast<size_t>(k) * py + n];
      out.at(m, n) = Complex(0.0, -static_cast<double>(m)) * (0.5 * d);
    }
  }
  return out;
}

}  // namespace hallbraid
