#pragma once

#include "fcp/grid.hpp"

namespace fcp {

/// Steady 1D Darcy flow: -(k u')' = 0 on [0,1] with u(0) = 0, u(1) = 1.
///
/// Finite-volume discretization at the cell centers of k's grid with
/// harmonic flux averaging at the faces; the resulting tridiagonal system
/// is solved directly. The solution is monotone nondecreasing for any
/// positive permeability and exact when k is constant per cell.
Field solve_darcy_1d(const Field& permeability);

} // namespace fcp
