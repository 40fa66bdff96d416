#pragma once

#include <optional>
#include <vector>

#include "fcp/grid.hpp"

namespace fcp {

/// 2D incompressible Navier-Stokes in vorticity form on the periodic unit
/// square, integrated pseudo-spectrally: exact integrating-factor
/// diffusion, 2/3-rule dealiased advection, explicit second-order (Heun)
/// treatment of advection + forcing.
struct NSConfig {
    std::size_t grid_size = 64;   ///< cells per axis; must be a power of two
    double viscosity = 1e-3;      ///< > 0
    double forcing_amplitude = 0.1; ///< default forcing 0.1 sin(2 pi (x + y))
    std::optional<Field> forcing; ///< overrides the default when set
    double dt = 0.0;              ///< substep; 0 selects from the advective CFL
    double cfl = 0.5;             ///< advective CFL target for automatic dt
    double horizon = 50.0;        ///< final time T
    std::size_t snapshots = 200;  ///< equally spaced states including t = 0
    bool dealias = true;          ///< 2/3-rule truncation of the nonlinear term
};

/// Periodic uniform grid for the configured resolution.
GridPtr ns_grid(const NSConfig& cfg);

/// Integrate from the initial vorticity and return `snapshots` states at
/// times k * horizon / (snapshots - 1), the first being omega0 itself.
/// Throws numeric_error (with the failing step index) if the state blows
/// up, and invalid_argument for non power-of-two or non-square grids.
std::vector<Field> ns_rollout(const Field& omega0, const NSConfig& cfg);

/// Advance one state by `dt_total` (a single-interval rollout).
Field ns_advance(const Field& omega, double dt_total, const NSConfig& cfg);

} // namespace fcp
