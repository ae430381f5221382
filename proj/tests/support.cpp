#include "support.hpp"

namespace ephx::fixtures {

const Grid& default_grid() {
  static const Grid g = Grid::centered(4096, 0.2);
  return g;
}

const PotentialProfile& lab_barrier() {
  static const PotentialProfile v = double_barrier(default_grid(), 2.0, 0.3, 16.0, 0.0);
  return v;
}

const EnergyBasis& lab_basis() {
  static const EnergyBasis b = diagonalize(lab_barrier(), Constants::m_eff);
  return b;
}

const EnergyBasis& free_basis() {
  static const EnergyBasis b = diagonalize(free_space(default_grid()), Constants::m_eff);
  return b;
}

}  // namespace ephx::fixtures
