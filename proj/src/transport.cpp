#include "fcp/transport.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fcp/conformal.hpp"
#include "fcp/errors.hpp"

namespace fcp {

std::vector<TauAtResolution> resolution_sweep(const ResolutionPredictor& predictor,
                                              std::span<const CalibrationSet> sets,
                                              double alpha) {
    if (sets.size() < 2) {
        throw std::invalid_argument("resolution_sweep: need at least two resolutions");
    }
    std::vector<TauAtResolution> out;
    out.reserve(sets.size());
    for (const auto& set : sets) {
        if (set.inputs.empty() || set.inputs.size() != set.truths.size()) {
            throw std::invalid_argument("resolution_sweep: empty or mismatched set at R=" +
                                        std::to_string(set.resolution));
        }
        std::vector<Field> preds;
        preds.reserve(set.inputs.size());
        const GridPtr target = set.truths[0].grid_ptr();
        for (const auto& input : set.inputs) {
            preds.push_back(predictor(input, target));
        }
        const auto scores = nonconformity_scores(preds, set.truths);
        out.push_back({set.resolution, calibrate(scores, alpha).tau});
    }
    return out;
}

TransportFit fit_log_linear(std::span<const TauAtResolution> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("fit_log_linear: need at least two points");
    }
    TransportFit fit;
    for (const auto& p : points) {
        if (!(p.tau > 0.0) || !std::isfinite(p.tau)) {
            throw std::invalid_argument("fit_log_linear: taus must be positive and finite");
        }
        fit.resolutions.push_back(static_cast<double>(p.resolution));
        fit.taus.push_back(p.tau);
    }
    const auto n = static_cast<double>(points.size());
    double mean_r = 0.0, mean_l = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        mean_r += fit.resolutions[i];
        mean_l += std::log(fit.taus[i]);
    }
    mean_r /= n;
    mean_l /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dr = fit.resolutions[i] - mean_r;
        sxx += dr * dr;
        sxy += dr * (std::log(fit.taus[i]) - mean_l);
    }
    if (sxx == 0.0) {
        throw numeric_error("fit_log_linear: resolutions are identical (rank deficient)");
    }
    fit.slope = sxy / sxx;
    fit.intercept = mean_l - fit.slope * mean_r;
    double ss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = std::log(fit.taus[i]) - (fit.slope * fit.resolutions[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

ExtrapolatedTau extrapolate_tau(const TransportFit& fit, int resolution) {
    double max_r = fit.resolutions.empty() ? 0.0 : fit.resolutions[0];
    for (double r : fit.resolutions) max_r = std::max(max_r, r);
    ExtrapolatedTau out;
    out.tau = std::exp(fit.slope * static_cast<double>(resolution) + fit.intercept);
    out.beyond_fit_range = static_cast<double>(resolution) > max_r;
    return out;
}

RadiusDecomposition decompose_radius(double tau, const Field& reference,
                                     const GridPtr& coarse, std::size_t n_cal) {
    const Grid& fine = reference.grid();
    if (fine.dim() != coarse->dim()) {
        throw std::invalid_argument("decompose_radius: dimension mismatch");
    }
    for (std::size_t k = 0; k < fine.dim(); ++k) {
        if (fine.cells(k) <= coarse->cells(k)) {
            throw std::invalid_argument(
                "decompose_radius: reference must be strictly finer than the grid");
        }
    }
    if (n_cal == 0) throw std::invalid_argument("decompose_radius: n_cal must be >= 1");

    const double ref_norm = weighted_norm(reference);
    if (ref_norm == 0.0) {
        throw degenerate_error("decompose_radius: reference has zero norm");
    }
    const Field restricted = resample(reference, coarse);
    const Field lifted = resample(restricted, reference.grid_ptr());
    RadiusDecomposition d;
    d.eps_disc = weighted_distance(lifted, reference) / ref_norm;
    d.eps_cal = 1.0 / std::sqrt(static_cast<double>(n_cal));
    d.eps_misspec = tau - d.eps_disc - d.eps_cal;
    return d;
}

} // namespace fcp
