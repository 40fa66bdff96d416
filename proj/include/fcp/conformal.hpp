#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fcp/grid.hpp"

namespace fcp {

/// Which discrete norm feeds the relative nonconformity score.
enum class ScoreNorm {
    QuadratureWeighted, ///< cell-volume weighted (the default everywhere)
    PlainL2,            ///< unweighted, for the grid-geometry ablation
};

/// Output of split conformal calibration at level alpha.
///
/// tau is the ceil((1-alpha)(n+1))-th smallest calibration score. When
/// that index exceeds n (tiny calibration sets), tau is +infinity and
/// `conservative` is set instead of failing, so pipelines stay total.
struct CalibrationResult {
    double alpha = 0.0;
    std::vector<double> scores; ///< ascending
    std::size_t k_index = 0;    ///< 1-based order statistic
    double tau = 0.0;
    bool conservative = false;
    double c1 = 1.0; ///< bilipschitz lower constant in (0, 1]
    double c2 = 1.0; ///< upper constant; stored only, no computation uses it
};

/// Coverage rates over a test set.
struct CoverageReport {
    double functional = 0.0;                ///< fraction of pairs with score <= tau
    std::optional<double> pointwise;        ///< fraction of points inside [lower, upper]
    std::size_t n_functions = 0;
    std::size_t n_points = 0;
    double tv_lower_bound = 0.0;            ///< max(0, (1-alpha) - functional)
};

/// Relative discrete-norm error of each (prediction, truth) pair, order
/// preserved. Throws degenerate_error on a zero-norm prediction.
std::vector<double> nonconformity_scores(std::span<const Field> preds,
                                         std::span<const Field> truths,
                                         ScoreNorm norm = ScoreNorm::QuadratureWeighted);

/// k = ceil((1 - alpha)(n + 1)) computed exactly in integer arithmetic on
/// the binary representation of alpha, so order-statistic indices never
/// drift from floating-point rounding (0.9 * 10 must give 9, not 10).
std::size_t conformal_quantile_index(double alpha, std::size_t n);

CalibrationResult calibrate(std::vector<double> scores, double alpha,
                            double c1 = 1.0, double c2 = 1.0);

/// Radius of the functional prediction ball: tau / c1.
double functional_radius(const CalibrationResult& calib);

/// Functional coverage of the test pairs at threshold tau; pointwise
/// coverage additionally when per-pair bounds are supplied.
CoverageReport coverage(std::span<const Field> preds, std::span<const Field> truths,
                        double tau, double alpha,
                        std::span<const Field> lower = {},
                        std::span<const Field> upper = {},
                        ScoreNorm norm = ScoreNorm::QuadratureWeighted);

/// Negative log volume of the prediction set in R^d: an ellipsoid with
/// semi-axes tau / sqrt(w_k) under the weighted norm, a ball of radius
/// tau when all weights are 1. Reported signed (it is negative whenever
/// the set volume exceeds 1).
double log_volume_score(std::span<const double> weights, double tau);

} // namespace fcp
