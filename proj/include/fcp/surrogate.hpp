#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fcp/grid.hpp"

namespace fcp {

/// Linear operator in truncated Fourier space: maps the retained spectral
/// coefficients of the input field (plus a constant channel) to retained
/// output coefficients, then synthesizes the band-limited prediction at
/// any target grid's cell centers. Resolution-flexible by construction.
///
/// Modes are m in {-M..M}^D, flattened row-major; K = (2M+1)^D. `coef` is
/// (K+1) x K with the last row acting on the constant channel, so the fit
/// can absorb mean offsets; ridge penalizes every row including that one.
struct SpectralOperator {
    std::size_t dim = 0;
    std::size_t modes = 0;
    std::vector<std::size_t> train_cells; ///< grid the fit was computed on
    double ridge = 0.0;
    double fit_residual = 0.0; ///< mean relative weighted training error
    Eigen::MatrixXcd coef;     ///< (K+1) x K

    std::size_t coeff_count() const;
};

/// Retained-spectrum analysis of a field on a uniform grid. Exact
/// projection when every axis has at least 2 modes + 1 cells.
Eigen::VectorXcd spectral_analysis(const Field& field, std::size_t modes);

/// Band-limited synthesis of retained coefficients at the target grid's
/// cell centers (any geometry).
Field spectral_synthesis(const Eigen::VectorXcd& coeffs, const GridPtr& target,
                         std::size_t modes);

/// Ridge least squares in truncated spectral space over the training set.
/// Throws numeric_error when ridge = 0 leaves the normal equations
/// singular (the message suggests a positive ridge).
SpectralOperator fit_spectral_operator(std::span<const Field> inputs,
                                       std::span<const Field> outputs,
                                       std::size_t modes, double ridge);

/// Apply the operator to an input (uniform grid) and synthesize on the
/// target grid. The target must resolve the retained modes.
Field predict(const SpectralOperator& op, const Field& input, const GridPtr& target);

/// n stochastic realizations: each member is the prediction of a copy of
/// the operator whose coefficients carry independent zero-mean complex
/// perturbations of relative scale noise_scale. Sampling is equivalent in
/// distribution to perturbing every coefficient entry, drawn per member
/// from the counter-based PRNG, so members are reproducible per seed.
std::vector<Field> ensemble_predict(const SpectralOperator& op, const Field& input,
                                    std::size_t n, double noise_scale, std::uint64_t seed);
std::vector<Field> ensemble_predict(const SpectralOperator& op, const Field& input,
                                    std::size_t n, double noise_scale, std::uint64_t seed,
                                    const GridPtr& target);

/// Quantile triplet: a ridge-fit central head plus lower/upper heads fit
/// by subgradient descent on the mean pinball loss of pointwise
/// residuals.
struct TripletPredictor {
    SpectralOperator lo, mid, hi;
    double q_lo = 0.1;
    double q_hi = 0.9;
    /// Best-so-far training loss recorded at evenly spaced checkpoints
    /// (nonincreasing by construction of best-iterate tracking).
    std::vector<double> checkpoints_lo, checkpoints_hi;
};

TripletPredictor fit_quantile_triplet(std::span<const Field> inputs,
                                      std::span<const Field> outputs, std::size_t modes,
                                      double q_lo, double q_hi, std::size_t steps,
                                      double step_size, double ridge = 1e-8);

/// rho_q(r) = r (q - 1[r < 0]) averaged over all residuals.
double pinball_loss(double q, std::span<const double> residuals);

/// Mean pinball loss of the head on the given pairs, plus its subgradient
/// with respect to the head coefficients: real and imaginary partials
/// packed as the complex entries of `grad`.
double pinball_objective_with_gradient(const SpectralOperator& head,
                                       std::span<const Field> inputs,
                                       std::span<const Field> outputs, double q,
                                       Eigen::MatrixXcd& grad);

/// Mean pinball loss of a head's pointwise predictions against the
/// outputs, at level q.
double mean_pinball(const SpectralOperator& head, std::span<const Field> inputs,
                    std::span<const Field> outputs, double q);

} // namespace fcp
