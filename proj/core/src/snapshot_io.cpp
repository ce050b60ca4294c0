#include "hallbraid/snapshot_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "hallbraid/transforms.hpp"

namespace hallbraid {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const SpectralField& c,
                    const ModelParams& p, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ParseError("write_snapshot: cannot open " + path);
  const GridSpec& g = c.grid();
  out << "HALLBRAID-SNAP v1\n";
  out << "nx=" << g.nx << " ny=" << g.ny << " padded_nx=" << g.padded_nx
      << " padded_ny=" << g.padded_ny << "\n";
  out << "time=" << format_full(c.time()) << "\n";
  out << "alpha=" << format_full(p.alpha) << " beta=" << format_full(p.beta)
      << " gamma=" << format_full(p.gamma) << "\n";
  out << "config_hash=" << (config_hash.empty() ? "-" : config_hash) << "\n";
  out << "modes=" << (g.mmax() + 1) * g.ny << "\n";
  out << "m n re im\n";
  for (int n = 1; n <= g.ny; ++n) {
    for (int m = 0; m <= g.mmax(); ++m) {
      const Complex v = c.at(m, n);
      out << m << " " << n << " " << format_full(v.real()) << " "
          << format_full(v.imag()) << "\n";
    }
  }
  if (!out) throw ParseError("write_snapshot: write failed for " + path);
}

namespace {

std::map<std::string, std::string> parse_kv_line(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

double to_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ParseError("malformed number for " + what + ": '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError(what + " must be an integer: '" + s + "'");
  return i;
}

}  // namespace

SpectralField read_snapshot(const std::string& path, ModelParams* params_out,
                            std::string* hash_out) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_snapshot: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "HALLBRAID-SNAP v1")
    throw ParseError("read_snapshot: missing format tag in " + path);

  std::map<std::string, std::string> header;
  while (std::getline(in, line)) {
    if (line == "m n re im") break;
    for (const auto& [k, v] : parse_kv_line(line)) header[k] = v;
  }
  for (const char* key :
       {"nx", "ny", "padded_nx", "padded_ny", "time", "alpha", "beta",
        "gamma", "modes"})
    if (!header.count(key))
      throw ParseError(std::string("read_snapshot: missing header key ") +
                       key);

  GridSpec grid(to_int(header["nx"], "nx"), to_int(header["ny"], "ny"),
                to_int(header["padded_nx"], "padded_nx"),
                to_int(header["padded_ny"], "padded_ny"));
  SpectralField field(grid, to_double(header["time"], "time"));
  if (params_out)
    *params_out = ModelParams(to_double(header["alpha"], "alpha"),
                              to_double(header["beta"], "beta"),
                              to_double(header["gamma"], "gamma"));
  if (hash_out) *hash_out = header.count("config_hash")
                                ? header["config_hash"]
                                : std::string("-");

  const long expected = to_int(header["modes"], "modes");
  long count = 0;
  int m, n;
  double re, im;
  while (in >> m >> n >> re >> im) {
    if (n < 1 || n > grid.ny || m < 0 || m > grid.mmax())
      throw ParseError("read_snapshot: mode out of range in " + path);
    field.at(m, n) = Complex(re, im);
    if (m > 0) field.at(-m, n) = std::conj(Complex(re, im));
    ++count;
  }
  if (count != expected)
    throw ParseError("read_snapshot: expected " + std::to_string(expected) +
                     " records, got " + std::to_string(count));
  return field;
}

namespace {

std::vector<double> unique_sorted(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

LoadedField load_grid_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_initial_condition: cannot open " + path);
  std::vector<double> xs, ys, vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    double x, y, v;
    if (!(iss >> x >> y >> v))
      throw ParseError("load_initial_condition: malformed row '" + line +
                       "'");
    xs.push_back(x);
    ys.push_back(y);
    vals.push_back(v);
  }
  if (vals.empty())
    throw ParseError("load_initial_condition: empty grid table");

  const double tol = 1e-9;
  const std::vector<double> ux = unique_sorted(xs, tol);
  const std::vector<double> uy = unique_sorted(ys, tol);
  const int nx = static_cast<int>(ux.size());
  const int py = static_cast<int>(uy.size());
  if (static_cast<size_t>(nx) * py != vals.size())
    throw ParseError("load_initial_condition: table is not a full grid");
  const int ny = py - 1;
  GridSpec grid(nx, ny);
  for (int i = 0; i < nx; ++i)
    if (std::abs(ux[i] - grid.x_node(i)) > 1e-8)
      throw ParseError("load_initial_condition: x nodes must be uniform over "
                       "[0,2pi)");
  for (int j = 0; j < py; ++j)
    if (std::abs(uy[j] - grid.y_node(j)) > 1e-8)
      throw ParseError("load_initial_condition: y nodes must be the midpoint "
                       "grid over [0,pi]");

  PhysicalField f(grid, 0.0);
  auto locate = [tol](const std::vector<double>& grid_vals, double v) {
    const auto it =
        std::lower_bound(grid_vals.begin(), grid_vals.end(), v - tol);
    return static_cast<int>(it - grid_vals.begin());
  };
  for (size_t r = 0; r < vals.size(); ++r)
    f.at(locate(ux, xs[r]), locate(uy, ys[r])) = vals[r];

  // The y-mean must be a constant; strip it and reject x-dependence.
  const double scale = std::max(f.max_abs(), 1.0);
  double mean_total = 0.0;
  std::vector<double> col_mean(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    double acc = 0.0;
    for (int j = 0; j < py; ++j) acc += f.at(i, j);
    col_mean[i] = acc / py;
    mean_total += col_mean[i];
  }
  const double c0 = mean_total / nx;
  for (int i = 0; i < nx; ++i)
    if (std::abs(col_mean[i] - c0) > 1e-8 * scale)
      throw MeanModeError(
          "load_initial_condition: y-mean varies with x; the mean mode must "
          "be x-independent");
  for (auto& v : f.data()) v -= c0;

  LoadedField out;
  out.field = enforce_symmetry(forward_transform(f, 1e-8));
  out.removed_mean = c0;
  return out;
}

}  // namespace

LoadedField load_initial_condition(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw ParseError("load_initial_condition: cannot open " + path);
  std::string first;
  std::getline(probe, first);
  probe.close();
  if (first == "HALLBRAID-SNAP v1") {
    LoadedField out;
    out.field = enforce_symmetry(read_snapshot(path));
    out.removed_mean = 0.0;
    return out;
  }
  return load_grid_table(path);
}

}  // namespace hallbraid
