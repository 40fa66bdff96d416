#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fcp/errors.hpp"
#include "fcp/spectral_detail.hpp"
#include "fcp/surrogate.hpp"

namespace fcp {

namespace {

// Shared precomputation for the pinball subgradient loop: per-axis
// synthesis tables on the training grid, augmented input spectra, and
// output samples as a matrix.
struct PinballProblem {
    std::size_t dim = 0;
    Eigen::Index nx = 0, ny = 0, kx = 0, ky = 0, k = 0, n = 0;
    Eigen::MatrixXcd phix, phiy;  // axis tables (phiy unused in 1D)
    Eigen::MatrixXcd inputs_aug;  // (K+1) x n, last row ones
    Eigen::MatrixXd targets;      // npts x n
};

PinballProblem build_problem(std::span<const Field> inputs, std::span<const Field> outputs,
                             std::size_t modes) {
    PinballProblem p;
    const Grid& grid = inputs[0].grid();
    p.dim = grid.dim();
    p.kx = static_cast<Eigen::Index>(2 * modes + 1);
    p.ky = p.dim == 2 ? p.kx : 1;
    p.k = p.kx * p.ky;
    p.n = static_cast<Eigen::Index>(inputs.size());
    p.nx = static_cast<Eigen::Index>(grid.cells(0));
    p.ny = p.dim == 2 ? static_cast<Eigen::Index>(grid.cells(1)) : 1;
    p.phix = spectral::axis_table(grid.centers(0), modes);
    if (p.dim == 2) p.phiy = spectral::axis_table(grid.centers(1), modes);

    p.inputs_aug.resize(p.k + 1, p.n);
    p.targets.resize(p.nx * p.ny, p.n);
    for (Eigen::Index i = 0; i < p.n; ++i) {
        p.inputs_aug.col(i).head(p.k) =
            spectral_analysis(inputs[static_cast<std::size_t>(i)], modes);
        p.inputs_aug(p.k, i) = 1.0;
        const auto v = outputs[static_cast<std::size_t>(i)].values();
        for (Eigen::Index j = 0; j < p.targets.rows(); ++j) {
            p.targets(j, i) = v[static_cast<std::size_t>(j)];
        }
    }
    return p;
}

// Loss and subgradient of the mean pinball objective at X. Returns the
// loss; fills grad when non-null.
double pinball_objective(const PinballProblem& p, const Eigen::MatrixXcd& x, double q,
                         Eigen::MatrixXcd* grad) {
    const double scale = 1.0 / static_cast<double>(p.n * p.nx * p.ny);
    if (grad) grad->setZero(p.k + 1, p.k);
    double loss = 0.0;
    Eigen::MatrixXcd cmat(p.kx, p.ky);
    for (Eigen::Index i = 0; i < p.n; ++i) {
        const Eigen::VectorXcd out = x.transpose() * p.inputs_aug.col(i);
        Eigen::MatrixXd pred;
        if (p.dim == 1) {
            pred = (p.phix * out).real();
        } else {
            for (Eigen::Index a = 0; a < p.kx; ++a) {
                cmat.row(a) = out.segment(a * p.ky, p.ky).transpose();
            }
            pred = (p.phix * cmat * p.phiy.transpose()).real();
        }
        // field values are row-major over (x, y) cells
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            y(p.targets.col(i).data(), pred.rows(), pred.cols());
        // residual r = y - pred; alpha = q - 1[r < 0]
        Eigen::MatrixXd alpha(pred.rows(), pred.cols());
        for (Eigen::Index r = 0; r < pred.rows(); ++r) {
            for (Eigen::Index c = 0; c < pred.cols(); ++c) {
                const double res = y(r, c) - pred(r, c);
                const double a = res < 0.0 ? q - 1.0 : q;
                alpha(r, c) = a;
                loss += res * a;
            }
        }
        if (grad) {
            Eigen::VectorXcd back(p.k);
            if (p.dim == 1) {
                back = p.phix.adjoint() * alpha;
            } else {
                const Eigen::MatrixXcd b = p.phix.adjoint() * alpha * p.phiy.conjugate();
                for (Eigen::Index a = 0; a < p.kx; ++a) {
                    back.segment(a * p.ky, p.ky) = b.row(a).transpose();
                }
            }
            grad->noalias() -= p.inputs_aug.col(i).conjugate() * back.transpose();
        }
    }
    if (grad) *grad *= scale;
    return loss * scale;
}

SpectralOperator fit_quantile_head(const PinballProblem& p, const SpectralOperator& mid,
                                   double q, std::size_t steps, double step_size,
                                   std::vector<double>& checkpoints) {
    Eigen::MatrixXcd x = mid.coef;
    Eigen::MatrixXcd grad;
    Eigen::MatrixXcd best_x = x;
    double best_loss = pinball_objective(p, x, q, nullptr);
    const double initial_loss = best_loss;
    // Blow-up guard. The data-scale baseline (pinball loss of predicting
    // the global mean) keeps near-perfect warm starts, whose initial loss
    // sits at rounding level, from tripping it on benign wander.
    const double target_mean = p.targets.mean();
    double baseline = 0.0;
    for (Eigen::Index c = 0; c < p.targets.cols(); ++c) {
        for (Eigen::Index r = 0; r < p.targets.rows(); ++r) {
            const double res = p.targets(r, c) - target_mean;
            baseline += res * (res < 0.0 ? q - 1.0 : q);
        }
    }
    baseline /= static_cast<double>(p.targets.size());
    const double divergence_bar = 10.0 * std::max(initial_loss, baseline);
    checkpoints.clear();
    const std::size_t interval = std::max<std::size_t>(1, steps / 20);

    for (std::size_t s = 0; s < steps; ++s) {
        const double loss = pinball_objective(p, x, q, &grad);
        if (loss > divergence_bar) {
            throw numeric_error(
                "fit_quantile_triplet: pinball descent diverged; reduce step_size");
        }
        if (loss < best_loss) {
            best_loss = loss;
            best_x = x;
        }
        if (s % interval == 0) checkpoints.push_back(best_loss);
        x.noalias() -= step_size * grad;
    }
    const double final_loss = pinball_objective(p, x, q, nullptr);
    if (final_loss < best_loss) {
        best_loss = final_loss;
        best_x = x;
    }
    checkpoints.push_back(best_loss);

    SpectralOperator head = mid;
    head.coef = std::move(best_x);
    head.fit_residual = best_loss;
    return head;
}

} // namespace

double pinball_objective_with_gradient(const SpectralOperator& head,
                                       std::span<const Field> inputs,
                                       std::span<const Field> outputs, double q,
                                       Eigen::MatrixXcd& grad) {
    if (inputs.size() != outputs.size() || inputs.empty()) {
        throw std::invalid_argument(
            "pinball_objective_with_gradient: need a nonempty matched set");
    }
    const PinballProblem p = build_problem(inputs, outputs, head.modes);
    return pinball_objective(p, head.coef, q, &grad);
}

double pinball_loss(double q, std::span<const double> residuals) {
    if (residuals.empty()) return 0.0;
    double s = 0.0;
    for (double r : residuals) {
        s += r * (r < 0.0 ? q - 1.0 : q);
    }
    return s / static_cast<double>(residuals.size());
}

double mean_pinball(const SpectralOperator& head, std::span<const Field> inputs,
                    std::span<const Field> outputs, double q) {
    if (inputs.size() != outputs.size() || inputs.empty()) {
        throw std::invalid_argument("mean_pinball: need a nonempty matched set");
    }
    double total = 0.0;
    std::size_t count = 0;
    std::vector<double> res;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Field pred = predict(head, inputs[i], outputs[i].grid_ptr());
        const auto pv = pred.values();
        const auto yv = outputs[i].values();
        res.resize(pv.size());
        for (std::size_t j = 0; j < pv.size(); ++j) res[j] = yv[j] - pv[j];
        total += pinball_loss(q, res) * static_cast<double>(pv.size());
        count += pv.size();
    }
    return total / static_cast<double>(count);
}

TripletPredictor fit_quantile_triplet(std::span<const Field> inputs,
                                      std::span<const Field> outputs, std::size_t modes,
                                      double q_lo, double q_hi, std::size_t steps,
                                      double step_size, double ridge) {
    if (!(0.0 < q_lo && q_lo < 0.5 && 0.5 < q_hi && q_hi < 1.0)) {
        throw std::invalid_argument("fit_quantile_triplet: need 0 < q_lo < 0.5 < q_hi < 1");
    }
    if (steps < 1) throw std::invalid_argument("fit_quantile_triplet: steps must be >= 1");
    if (!(step_size > 0.0)) {
        throw std::invalid_argument("fit_quantile_triplet: step_size must be positive");
    }

    TripletPredictor t;
    t.q_lo = q_lo;
    t.q_hi = q_hi;
    t.mid = fit_spectral_operator(inputs, outputs, modes, ridge);
    const PinballProblem p = build_problem(inputs, outputs, modes);
    t.lo = fit_quantile_head(p, t.mid, q_lo, steps, step_size, t.checkpoints_lo);
    t.hi = fit_quantile_head(p, t.mid, q_hi, steps, step_size, t.checkpoints_hi);
    return t;
}

} // namespace fcp
