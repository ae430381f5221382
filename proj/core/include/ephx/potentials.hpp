#pragma once

#include <string>
#include <vector>

#include "ephx/units.hpp"

namespace ephx {

struct PotentialProfile {
  Grid grid;
  std::vector<double> v;  // eV per grid point

  PotentialProfile() = default;
  explicit PotentialProfile(const Grid& g) : grid(g), v(g.nx, 0.0) {}
  PotentialProfile(const Grid& g, std::vector<double> values);

  double operator[](int i) const { return v[i]; }
  // True when v(x_i) == v(x_{nx-1-i}) for all i.
  bool mirror_symmetric(double tol = 0.0) const;
};

PotentialProfile free_space(const Grid& grid);

// Two rectangular barriers of width b_width around a well of width well_width, symmetric about
// center. A grid point is inside a barrier when it lies strictly within the barrier interval;
// edges therefore snap to cell boundaries on a grid whose points sit at cell centres.
PotentialProfile double_barrier(const Grid& grid, double b_width, double height, double well_width,
                                double center = 0.0);

// Single rectangular barrier on [left, right].
PotentialProfile rectangular_barrier(const Grid& grid, double left, double right, double height);

PotentialProfile shifted(const PotentialProfile& p, double c);

double barrier_area(const PotentialProfile& p);

void write_potential_csv(const std::string& path, const PotentialProfile& p);

}  // namespace ephx
