#include "fcp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fcp/errors.hpp"

namespace fcp {

std::vector<double> nonconformity_scores(std::span<const Field> preds,
                                         std::span<const Field> truths,
                                         ScoreNorm norm) {
    if (preds.size() != truths.size()) {
        throw std::invalid_argument("nonconformity_scores: pair count mismatch");
    }
    std::vector<double> scores;
    scores.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        scores.push_back(norm == ScoreNorm::QuadratureWeighted
                             ? relative_weighted_error(preds[i], truths[i])
                             : relative_plain_error(preds[i], truths[i]));
    }
    return scores;
}

std::size_t conformal_quantile_index(double alpha, std::size_t n) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("conformal_quantile_index: alpha must lie in (0, 1)");
    }
    // alpha == m * 2^(-s) exactly, with m an integer < 2^53.
    int exp2 = 0;
    const double fr = std::frexp(alpha, &exp2);
    const auto m = static_cast<unsigned __int128>(std::ldexp(fr, 53));
    const int s = 53 - exp2; // >= 53 since alpha < 1

    // ceil((n+1) - y) = (n+1) - floor(y) for y = alpha(n+1) > 0, whether
    // or not y is an integer. floor(y) = (m * (n+1)) >> s exactly.
    const auto np1 = static_cast<unsigned __int128>(n) + 1;
    const unsigned __int128 prod = m * np1; // < 2^53 * 2^64 fits in 128 bits
    const unsigned __int128 floor_y = s < 127 ? prod >> s : 0;
    return static_cast<std::size_t>(np1 - floor_y);
}

CalibrationResult calibrate(std::vector<double> scores, double alpha, double c1, double c2) {
    if (scores.empty()) throw std::invalid_argument("calibrate: empty score list");
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("calibrate: alpha must lie in (0, 1)");
    }
    if (!(c1 > 0.0) || c1 > 1.0) {
        throw std::invalid_argument("calibrate: c1 must lie in (0, 1]");
    }
    for (double s : scores) {
        if (!std::isfinite(s) || s < 0.0) {
            throw std::invalid_argument("calibrate: scores must be finite and nonnegative");
        }
    }
    std::sort(scores.begin(), scores.end());

    CalibrationResult r;
    r.alpha = alpha;
    r.k_index = conformal_quantile_index(alpha, scores.size());
    r.conservative = r.k_index > scores.size();
    r.tau = r.conservative ? std::numeric_limits<double>::infinity() : scores[r.k_index - 1];
    r.scores = std::move(scores);
    r.c1 = c1;
    r.c2 = c2;
    return r;
}

double functional_radius(const CalibrationResult& calib) {
    if (!(calib.c1 > 0.0)) {
        throw std::invalid_argument("functional_radius: c1 must be positive");
    }
    return calib.tau / calib.c1;
}

CoverageReport coverage(std::span<const Field> preds, std::span<const Field> truths,
                        double tau, double alpha,
                        std::span<const Field> lower, std::span<const Field> upper,
                        ScoreNorm norm) {
    if (preds.empty() || preds.size() != truths.size()) {
        throw std::invalid_argument("coverage: need a nonempty matched test set");
    }
    const bool with_bounds = !lower.empty() || !upper.empty();
    if (with_bounds && (lower.size() != preds.size() || upper.size() != preds.size())) {
        throw std::invalid_argument("coverage: bounds must match the test set size");
    }

    CoverageReport rep;
    rep.n_functions = preds.size();
    std::size_t hits = 0;
    std::size_t point_hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double s = norm == ScoreNorm::QuadratureWeighted
                             ? relative_weighted_error(preds[i], truths[i])
                             : relative_plain_error(preds[i], truths[i]);
        if (s <= tau) ++hits;
        if (with_bounds) {
            if (!lower[i].grid().same_geometry(truths[i].grid()) ||
                !upper[i].grid().same_geometry(truths[i].grid())) {
                throw std::invalid_argument("coverage: bound grids do not match truth grids");
            }
            const auto lo = lower[i].values();
            const auto hi = upper[i].values();
            const auto tv = truths[i].values();
            for (std::size_t j = 0; j < tv.size(); ++j) {
                if (lo[j] <= tv[j] && tv[j] <= hi[j]) ++point_hits;
            }
            rep.n_points += tv.size();
        }
    }
    rep.functional = static_cast<double>(hits) / static_cast<double>(preds.size());
    if (with_bounds) {
        rep.pointwise = static_cast<double>(point_hits) / static_cast<double>(rep.n_points);
    }
    rep.tv_lower_bound = std::max(0.0, (1.0 - alpha) - rep.functional);
    return rep;
}

double log_volume_score(std::span<const double> weights, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("log_volume_score: tau must be positive");
    if (weights.empty()) throw std::invalid_argument("log_volume_score: empty weights");
    const double d = static_cast<double>(weights.size());
    double half_log_w = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw std::invalid_argument("log_volume_score: weights must be positive");
        }
        half_log_w += 0.5 * std::log(w);
    }
    constexpr double kLogPi = 1.1447298858494001741434273513531;
    return half_log_w - d * std::log(tau) + std::lgamma(0.5 * d + 1.0) - 0.5 * d * kLogPi;
}

} // namespace fcp
