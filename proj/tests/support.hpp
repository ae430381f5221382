#pragma once

#include "ephx/potentials.hpp"
#include "ephx/spectral.hpp"
#include "ephx/units.hpp"

namespace ephx::fixtures {

// Default 4096 x 0.2 nm grid, the 2 nm / 0.3 eV / 16 nm double barrier and its basis;
// built once per test binary.
const Grid& default_grid();
const PotentialProfile& lab_barrier();
const EnergyBasis& lab_basis();
const EnergyBasis& free_basis();

}  // namespace ephx::fixtures
