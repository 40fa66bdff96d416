#include "fcp/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "fcp/errors.hpp"

namespace fcp {

namespace {

// Per-cell face transmissibilities of the 5-point flux stencil, already
// divided by the cell volume. For cell (i, j):
//   (t_xlo u_W + t_xhi u_E + t_ylo u_S + t_yhi u_N - t_diag u_C) = f
// with boundary neighbors pinned to the Dirichlet value 0.
struct Stencil {
    std::size_t nx = 0, ny = 0;
    std::vector<double> t_xlo, t_xhi, t_ylo, t_yhi, t_diag;
};

Stencil build_stencil(const Grid& grid) {
    Stencil s;
    s.nx = grid.cells(0);
    s.ny = grid.cells(1);
    const auto cx = grid.centers(0);
    const auto cy = grid.centers(1);
    const auto ex = grid.edges(0);
    const auto ey = grid.edges(1);

    const std::size_t n = s.nx * s.ny;
    s.t_xlo.resize(n);
    s.t_xhi.resize(n);
    s.t_ylo.resize(n);
    s.t_yhi.resize(n);
    s.t_diag.resize(n);
    for (std::size_t i = 0; i < s.nx; ++i) {
        const double dxi = ex[i + 1] - ex[i];
        const double dxl = i > 0 ? cx[i] - cx[i - 1] : cx[0] - 0.0;
        const double dxr = i + 1 < s.nx ? cx[i + 1] - cx[i] : 1.0 - cx[s.nx - 1];
        for (std::size_t j = 0; j < s.ny; ++j) {
            const double dyj = ey[j + 1] - ey[j];
            const double dyl = j > 0 ? cy[j] - cy[j - 1] : cy[0] - 0.0;
            const double dyr = j + 1 < s.ny ? cy[j + 1] - cy[j] : 1.0 - cy[s.ny - 1];
            const std::size_t id = i * s.ny + j;
            s.t_xlo[id] = 1.0 / (dxl * dxi);
            s.t_xhi[id] = 1.0 / (dxr * dxi);
            s.t_ylo[id] = 1.0 / (dyl * dyj);
            s.t_yhi[id] = 1.0 / (dyr * dyj);
            s.t_diag[id] = s.t_xlo[id] + s.t_xhi[id] + s.t_ylo[id] + s.t_yhi[id];
        }
    }
    return s;
}

} // namespace

struct PoissonSolver::Impl {
    PoissonMethod method;
    double tol;
    std::size_t max_iters;
    Stencil stencil;
    Eigen::SparseMatrix<double> matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

    Field solve_direct(const Field& f) const {
        const auto fv = f.values();
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(fv.size()));
        for (std::size_t i = 0; i < fv.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = fv[i];
        Eigen::VectorXd u = lu.solve(rhs);
        if (lu.info() != Eigen::Success) {
            throw numeric_error("solve_poisson_2d: sparse solve failed");
        }
        std::vector<double> out(fv.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[static_cast<Eigen::Index>(i)];
        return Field(f.grid_ptr(), std::move(out));
    }

    Field solve_jacobi(const Field& f) const {
        const auto fv = f.values();
        const std::size_t nx = stencil.nx, ny = stencil.ny;
        std::vector<double> u(fv.size(), 0.0), unew(fv.size(), 0.0);
        const auto neighbor_sum = [&](const std::vector<double>& v, std::size_t i,
                                      std::size_t j) {
            const std::size_t id = i * ny + j;
            double nb = 0.0;
            if (i > 0) nb += stencil.t_xlo[id] * v[id - ny];
            if (i + 1 < nx) nb += stencil.t_xhi[id] * v[id + ny];
            if (j > 0) nb += stencil.t_ylo[id] * v[id - 1];
            if (j + 1 < ny) nb += stencil.t_yhi[id] * v[id + 1];
            return nb;
        };
        double residual = 0.0;
        for (std::size_t it = 0; it < max_iters; ++it) {
            for (std::size_t i = 0; i < nx; ++i) {
                for (std::size_t j = 0; j < ny; ++j) {
                    const std::size_t id = i * ny + j;
                    unew[id] = (neighbor_sum(u, i, j) - fv[id]) / stencil.t_diag[id];
                }
            }
            u.swap(unew);
            // residual in the max norm
            residual = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                for (std::size_t j = 0; j < ny; ++j) {
                    const std::size_t id = i * ny + j;
                    const double r = neighbor_sum(u, i, j) - stencil.t_diag[id] * u[id] - fv[id];
                    residual = std::max(residual, std::abs(r));
                }
            }
            if (residual < tol) {
                return Field(f.grid_ptr(), std::move(u));
            }
        }
        throw convergence_error("solve_poisson_2d: Jacobi did not reach tol " +
                                    std::to_string(tol) + "; final residual " +
                                    std::to_string(residual),
                                residual);
    }
};

PoissonSolver::PoissonSolver(GridPtr grid, PoissonMethod method, double tol,
                             std::size_t max_iters)
    : grid_(std::move(grid)), impl_(new Impl) {
    if (grid_->dim() != 2) throw std::invalid_argument("PoissonSolver: grid must be 2D");
    if (method == PoissonMethod::Jacobi && !(tol > 0.0)) {
        throw std::invalid_argument("PoissonSolver: Jacobi tolerance must be positive");
    }
    impl_->method = method;
    impl_->tol = tol;
    impl_->max_iters = max_iters;
    impl_->stencil = build_stencil(*grid_);

    if (method == PoissonMethod::Direct) {
        const Stencil& s = impl_->stencil;
        const auto n = static_cast<Eigen::Index>(s.nx * s.ny);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(n) * 5);
        for (std::size_t i = 0; i < s.nx; ++i) {
            for (std::size_t j = 0; j < s.ny; ++j) {
                const auto id = static_cast<Eigen::Index>(i * s.ny + j);
                trip.emplace_back(id, id, -s.t_diag[id]);
                if (i > 0) trip.emplace_back(id, id - static_cast<Eigen::Index>(s.ny), s.t_xlo[id]);
                if (i + 1 < s.nx) {
                    trip.emplace_back(id, id + static_cast<Eigen::Index>(s.ny), s.t_xhi[id]);
                }
                if (j > 0) trip.emplace_back(id, id - 1, s.t_ylo[id]);
                if (j + 1 < s.ny) trip.emplace_back(id, id + 1, s.t_yhi[id]);
            }
        }
        impl_->matrix.resize(n, n);
        impl_->matrix.setFromTriplets(trip.begin(), trip.end());
        impl_->matrix.makeCompressed();
        impl_->lu.compute(impl_->matrix);
        if (impl_->lu.info() != Eigen::Success) {
            throw numeric_error("PoissonSolver: factorization failed");
        }
    }
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

Field PoissonSolver::solve(const Field& f) const {
    if (!f.grid().same_geometry(*grid_)) {
        throw std::invalid_argument("PoissonSolver: field grid does not match solver grid");
    }
    return impl_->method == PoissonMethod::Direct ? impl_->solve_direct(f)
                                                  : impl_->solve_jacobi(f);
}

Field solve_poisson_2d(const Field& f, PoissonMethod method, double tol,
                       std::size_t max_iters) {
    PoissonSolver solver(f.grid_ptr(), method, tol, max_iters);
    return solver.solve(f);
}

} // namespace fcp
