#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fcp/grid.hpp"

namespace fcp {

/// Least-squares fit of log tau against resolution.
struct TransportFit {
    double slope = 0.0;     ///< per unit resolution
    double intercept = 0.0; ///< log radius at resolution 0
    std::vector<double> resolutions;
    std::vector<double> taus;
    double residual_rms = 0.0; ///< rms of log-tau residuals
};

struct TauAtResolution {
    int resolution = 0; ///< cells per axis
    double tau = 0.0;
};

/// Calibration split at one resolution: inputs and matching truths on a
/// uniform grid with `resolution` cells per axis.
struct CalibrationSet {
    int resolution = 0;
    std::vector<Field> inputs;
    std::vector<Field> truths;
};

/// Produces a prediction for the input on the requested target grid.
using ResolutionPredictor = std::function<Field(const Field& input, const GridPtr& target)>;

/// Score and calibrate each per-resolution set with the weighted relative
/// norm; one (R, tau) point per set.
std::vector<TauAtResolution> resolution_sweep(const ResolutionPredictor& predictor,
                                              std::span<const CalibrationSet> sets,
                                              double alpha);

/// Ordinary least squares on (R, log tau). Needs >= 2 points, positive
/// taus, and at least two distinct resolutions.
TransportFit fit_log_linear(std::span<const TauAtResolution> points);

struct ExtrapolatedTau {
    double tau = 0.0;
    bool beyond_fit_range = false; ///< resolution exceeds max fitted R
};

/// exp(slope * R + intercept), flagged when extrapolating past the fit.
ExtrapolatedTau extrapolate_tau(const TransportFit& fit, int resolution);

/// Heuristic split of the conformal radius into discretization,
/// calibration, and misspecification parts. eps_misspec may be negative
/// and is reported raw.
struct RadiusDecomposition {
    double eps_disc = 0.0;    ///< relative loss from restricting the reference
    double eps_cal = 0.0;     ///< 1 / sqrt(n_cal)
    double eps_misspec = 0.0; ///< tau - eps_disc - eps_cal
};

/// eps_disc is measured by restricting the fine reference field to the
/// coarse grid and lifting it back (both via resample), then taking the
/// relative weighted distance on the reference grid.
RadiusDecomposition decompose_radius(double tau, const Field& reference,
                                     const GridPtr& coarse, std::size_t n_cal);

} // namespace fcp
