#include "fcp/surrogate.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fcp/errors.hpp"
#include "fcp/rng.hpp"
#include "fcp/spectral_detail.hpp"

namespace fcp {

namespace spectral {

Eigen::MatrixXcd axis_table(std::span<const double> centers, std::size_t modes) {
    const auto n = static_cast<Eigen::Index>(centers.size());
    const auto k = static_cast<Eigen::Index>(2 * modes + 1);
    Eigen::MatrixXcd phi(n, k);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index a = 0; a < k; ++a) {
            const double m = static_cast<double>(a) - static_cast<double>(modes);
            const double angle = kTwoPi * m * centers[static_cast<std::size_t>(j)];
            phi(j, a) = std::complex<double>(std::cos(angle), std::sin(angle));
        }
    }
    return phi;
}

void require_analysis_grid(const Grid& grid, std::size_t modes) {
    if (grid.dim() < 1 || grid.dim() > 2) {
        throw std::invalid_argument("spectral operator: only 1D and 2D grids are supported");
    }
    if (grid.kind() != GridKind::Uniform) {
        throw std::invalid_argument(
            "spectral analysis: input must live on a uniform grid (equispaced sampling)");
    }
    for (std::size_t k = 0; k < grid.dim(); ++k) {
        if (grid.cells(k) < 2 * modes + 1) {
            throw std::invalid_argument("spectral analysis: modes exceed the grid Nyquist (need "
                                        "at least 2*modes+1 cells per axis)");
        }
    }
}

} // namespace spectral

std::size_t SpectralOperator::coeff_count() const {
    std::size_t k = 1;
    for (std::size_t i = 0; i < dim; ++i) k *= 2 * modes + 1;
    return k;
}

Eigen::VectorXcd spectral_analysis(const Field& field, std::size_t modes) {
    const Grid& grid = field.grid();
    spectral::require_analysis_grid(grid, modes);
    const auto scale = 1.0 / static_cast<double>(grid.total_cells());
    if (grid.dim() == 1) {
        const auto phi = spectral::axis_table(grid.centers(0), modes);
        Eigen::Map<const Eigen::VectorXd> v(field.values().data(),
                                            static_cast<Eigen::Index>(field.size()));
        return scale * (phi.adjoint() * v);
    }
    const auto phix = spectral::axis_table(grid.centers(0), modes);
    const auto phiy = spectral::axis_table(grid.centers(1), modes);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> v(
        field.values().data(), static_cast<Eigen::Index>(grid.cells(0)),
        static_cast<Eigen::Index>(grid.cells(1)));
    const Eigen::MatrixXcd c = scale * (phix.adjoint() * v * phiy.conjugate());
    Eigen::MatrixXcd ct = c.transpose(); // row-major flatten: x-mode major
    return Eigen::Map<Eigen::VectorXcd>(ct.data(), ct.size());
}

Field spectral_synthesis(const Eigen::VectorXcd& coeffs, const GridPtr& target,
                         std::size_t modes) {
    const std::size_t dim = target->dim();
    if (dim < 1 || dim > 2) {
        throw std::invalid_argument("spectral synthesis: only 1D and 2D grids are supported");
    }
    const auto k = static_cast<Eigen::Index>(2 * modes + 1);
    for (std::size_t a = 0; a < dim; ++a) {
        if (target->cells(a) < 2 * modes + 1) {
            throw std::invalid_argument("spectral synthesis: target too coarse for modes_kept");
        }
    }
    if (dim == 1) {
        const auto phi = spectral::axis_table(target->centers(0), modes);
        Eigen::VectorXd v = (phi * coeffs).real();
        return Field(target, std::vector<double>(v.data(), v.data() + v.size()));
    }
    const auto phix = spectral::axis_table(target->centers(0), modes);
    const auto phiy = spectral::axis_table(target->centers(1), modes);
    Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        c(coeffs.data(), k, k);
    Eigen::MatrixXd v = (phix * c * phiy.transpose()).real();
    std::vector<double> out(target->total_cells());
    for (std::size_t i = 0; i < target->cells(0); ++i) {
        for (std::size_t j = 0; j < target->cells(1); ++j) {
            out[i * target->cells(1) + j] =
                v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return Field(target, std::move(out));
}

SpectralOperator fit_spectral_operator(std::span<const Field> inputs,
                                       std::span<const Field> outputs, std::size_t modes,
                                       double ridge) {
    if (inputs.empty() || inputs.size() != outputs.size()) {
        throw std::invalid_argument("fit_spectral_operator: need a nonempty matched set");
    }
    if (ridge < 0.0) throw std::invalid_argument("fit_spectral_operator: ridge must be >= 0");
    const GridPtr grid = inputs[0].grid_ptr();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!inputs[i].grid().same_geometry(*grid) || !outputs[i].grid().same_geometry(*grid)) {
            throw std::invalid_argument("fit_spectral_operator: pairs must share one grid");
        }
    }
    spectral::require_analysis_grid(*grid, modes);

    SpectralOperator op;
    op.dim = grid->dim();
    op.modes = modes;
    op.train_cells = grid->cell_counts();
    op.ridge = ridge;
    const auto k = static_cast<Eigen::Index>(op.coeff_count());
    const auto n = static_cast<Eigen::Index>(inputs.size());

    Eigen::MatrixXcd a(n, k + 1);
    Eigen::MatrixXcd b(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        a.row(i).head(k) = spectral_analysis(inputs[static_cast<std::size_t>(i)], modes);
        a(i, k) = 1.0;
        b.row(i) = spectral_analysis(outputs[static_cast<std::size_t>(i)], modes);
    }

    Eigen::MatrixXcd gram = a.adjoint() * a;
    gram.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    const Eigen::VectorXd dvec = ldlt.vectorD().real();
    const double dmax = dvec.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
        dvec.cwiseAbs().minCoeff() <= dmax * 1e-13) {
        throw numeric_error(
            "fit_spectral_operator: singular normal equations; use ridge > 0");
    }
    op.coef = ldlt.solve(a.adjoint() * b);

    double resid = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Field pred = predict(op, inputs[i], grid);
        resid += relative_weighted_error(pred, outputs[i]);
    }
    op.fit_residual = resid / static_cast<double>(inputs.size());
    return op;
}

namespace {

Eigen::VectorXcd apply_coefficients(const SpectralOperator& op, const Eigen::VectorXcd& in) {
    const auto k = static_cast<Eigen::Index>(op.coeff_count());
    Eigen::VectorXcd a(k + 1);
    a.head(k) = in;
    a(k) = 1.0;
    return op.coef.transpose() * a;
}

} // namespace

Field predict(const SpectralOperator& op, const Field& input, const GridPtr& target) {
    if (input.grid().dim() != op.dim || target->dim() != op.dim) {
        throw std::invalid_argument("predict: dimension mismatch with the fitted operator");
    }
    const Eigen::VectorXcd in = spectral_analysis(input, op.modes);
    return spectral_synthesis(apply_coefficients(op, in), target, op.modes);
}

std::vector<Field> ensemble_predict(const SpectralOperator& op, const Field& input,
                                    std::size_t n, double noise_scale, std::uint64_t seed) {
    return ensemble_predict(op, input, n, noise_scale, seed, input.grid_ptr());
}

std::vector<Field> ensemble_predict(const SpectralOperator& op, const Field& input,
                                    std::size_t n, double noise_scale, std::uint64_t seed,
                                    const GridPtr& target) {
    if (n < 1) throw std::invalid_argument("ensemble_predict: need n >= 1 members");
    if (noise_scale < 0.0) {
        throw std::invalid_argument("ensemble_predict: noise_scale must be >= 0");
    }
    const auto k = static_cast<Eigen::Index>(op.coeff_count());
    Eigen::VectorXcd a(k + 1);
    a.head(k) = spectral_analysis(input, op.modes);
    a(k) = 1.0;
    const Eigen::VectorXcd base = op.coef.transpose() * a;

    // Entrywise relative perturbation of the operator, collapsed to its
    // distribution on the output coefficients: the p-th output picks up a
    // zero-mean complex Gaussian with std noise_scale * s_p, where
    // s_p^2 = sum_q |coef_qp|^2 |a_q|^2.
    Eigen::VectorXd spread(k);
    if (noise_scale > 0.0) {
        const Eigen::VectorXd a2 = a.cwiseAbs2();
        for (Eigen::Index p = 0; p < k; ++p) {
            spread(p) = std::sqrt(op.coef.col(p).cwiseAbs2().dot(a2));
        }
    }

    std::vector<Field> members;
    members.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        Eigen::VectorXcd out = base;
        if (noise_scale > 0.0) {
            CounterRng rng(seed, j);
            const double root_half = 0.70710678118654752440;
            for (Eigen::Index p = 0; p < k; ++p) {
                const double g1 = rng.next_gaussian();
                const double g2 = rng.next_gaussian();
                out(p) += noise_scale * spread(p) * root_half * std::complex<double>(g1, g2);
            }
        }
        members.push_back(spectral_synthesis(out, target, op.modes));
    }
    return members;
}

} // namespace fcp
