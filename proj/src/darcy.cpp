#include "fcp/darcy.hpp"

#include <stdexcept>
#include <vector>

namespace fcp {

Field solve_darcy_1d(const Field& permeability) {
    const Grid& grid = permeability.grid();
    if (grid.dim() != 1) throw std::invalid_argument("solve_darcy_1d: grid must be 1D");
    const auto k = permeability.values();
    for (double v : k) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("solve_darcy_1d: permeability must be positive");
        }
    }

    const auto c = grid.centers(0);
    const auto e = grid.edges(0);
    const std::size_t n = c.size();

    // Face transmissibilities. Interior face i+1/2 composes half-cell
    // resistances on either side (harmonic average of k weighted by the
    // center-to-face distances); boundary faces see a single half cell.
    std::vector<double> trans(n + 1);
    trans[0] = k[0] / (c[0] - 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double r = (e[i + 1] - c[i]) / k[i] + (c[i + 1] - e[i + 1]) / k[i + 1];
        trans[i + 1] = 1.0 / r;
    }
    trans[n] = k[n - 1] / (1.0 - c[n - 1]);

    // Flux conservation per cell: T_{i-1/2}(u_i - u_{i-1}) = T_{i+1/2}(u_{i+1} - u_i)
    // with Dirichlet values u = 0 and u = 1 at the domain faces.
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = -(trans[i] + trans[i + 1]);
        if (i > 0) lower[i] = trans[i];
        if (i + 1 < n) upper[i] = trans[i + 1];
    }
    rhs[n - 1] = -trans[n] * 1.0; // right boundary value

    // Thomas algorithm.
    std::vector<double> cp(n), dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / m;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
    }
    std::vector<double> u(n);
    u[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        u[i] = dp[i] - cp[i] * u[i + 1];
    }
    return Field(permeability.grid_ptr(), std::move(u));
}

} // namespace fcp
