#pragma once

#include <span>

#include <Eigen/Dense>

#include "fcp/grid.hpp"

namespace fcp::spectral {

/// Per-axis synthesis table: phi(j, a) = exp(i 2 pi m_a c_j) for the
/// retained modes m_a in {-M..M} at the given axis coordinates.
Eigen::MatrixXcd axis_table(std::span<const double> centers, std::size_t modes);

/// Analysis preconditions: 1D/2D uniform grid resolving the modes.
void require_analysis_grid(const Grid& grid, std::size_t modes);

} // namespace fcp::spectral
