#include "ephx/potentials.hpp"

#include <cmath>
#include <fstream>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"

namespace ephx {

namespace {
constexpr double kEdgeEps = 1e-9;

void require_inside(const Grid& g, double lo, double hi, const char* what) {
  // one cell of margin on each side so the structure is surrounded by v = 0
  if (lo - g.dx < g.x(0) || hi + g.dx > g.x(g.nx - 1))
    throw InvalidArgument(std::string(what) + ": structure clipped by the domain");
}
}  // namespace

PotentialProfile::PotentialProfile(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
  if (static_cast<int>(v.size()) != g.nx) throw InvalidArgument("potential: length != nx");
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument("potential: non-finite value");
}

bool PotentialProfile::mirror_symmetric(double tol) const {
  int n = grid.nx;
  for (int i = 0; i < n / 2; ++i)
    if (std::abs(v[i] - v[n - 1 - i]) > tol) return false;
  return true;
}

PotentialProfile free_space(const Grid& grid) { return PotentialProfile(grid); }

PotentialProfile double_barrier(const Grid& grid, double b_width, double height, double well_width,
                                double center) {
  if (!(b_width >= 0.0) || !(well_width >= 0.0)) throw InvalidArgument("double_barrier: negative width");
  if (!std::isfinite(height)) throw InvalidArgument("double_barrier: non-finite height");
  double half = 0.5 * well_width;
  require_inside(grid, center - half - b_width, center + half + b_width, "double_barrier");
  PotentialProfile p(grid);
  for (int i = 0; i < grid.nx; ++i) {
    double u = std::abs(grid.x(i) - center);
    if (u > half + kEdgeEps && u < half + b_width - kEdgeEps) p.v[i] = height;
  }
  return p;
}

PotentialProfile rectangular_barrier(const Grid& grid, double left, double right, double height) {
  if (!(right > left)) throw InvalidArgument("rectangular_barrier: right <= left");
  require_inside(grid, left, right, "rectangular_barrier");
  PotentialProfile p(grid);
  for (int i = 0; i < grid.nx; ++i) {
    double x = grid.x(i);
    if (x > left + kEdgeEps && x < right - kEdgeEps) p.v[i] = height;
  }
  return p;
}

PotentialProfile shifted(const PotentialProfile& p, double c) {
  PotentialProfile out = p;
  for (auto& x : out.v) x += c;
  return out;
}

double barrier_area(const PotentialProfile& p) {
  double s = 0.0;
  for (double x : p.v) s += x;
  return s * p.grid.dx;
}

void write_potential_csv(const std::string& path, const PotentialProfile& p) {
  CsvWriter w(path);
  w.header({"x_nm", "V_eV"});
  for (int i = 0; i < p.grid.nx; ++i) w.row(p.grid.x(i), p.v[i]);
}

}  // namespace ephx
