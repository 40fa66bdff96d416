#pragma once

#include <memory>

#include "fcp/grid.hpp"

namespace fcp {

enum class PoissonMethod {
    Direct, ///< sparse LU factorization
    Jacobi, ///< pointwise iteration to a residual tolerance
};

/// Solve the Poisson problem  laplace(u) = f  on [0,1]^2 with homogeneous
/// Dirichlet boundary (u = 0 on the domain boundary), discretized at cell
/// centers with the 5-point flux form on possibly nonuniform spacings.
/// The boundary condition enters through the one-sided spacing from the
/// first cell center to the domain face; no ghost cells.
Field solve_poisson_2d(const Field& f, PoissonMethod method = PoissonMethod::Direct,
                       double tol = 1e-10, std::size_t max_iters = 2000000);

/// Reusable solver: factorizes (Direct) or precomputes stencils (Jacobi)
/// once per grid, then solves per right-hand side. All solves are pure.
class PoissonSolver {
public:
    explicit PoissonSolver(GridPtr grid, PoissonMethod method = PoissonMethod::Direct,
                           double tol = 1e-10, std::size_t max_iters = 2000000);
    ~PoissonSolver();
    PoissonSolver(PoissonSolver&&) noexcept;
    PoissonSolver& operator=(PoissonSolver&&) noexcept;

    Field solve(const Field& f) const;
    const GridPtr& grid() const { return grid_; }

private:
    struct Impl;
    GridPtr grid_;
    std::unique_ptr<Impl> impl_;
};

} // namespace fcp
