#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fcp/grid.hpp"

namespace fcp {

/// Per-step diagnostics of an autoregressive ensemble forecast, all
/// relative quantities in the same units as the conformal radius.
struct StepDiagnostics {
    int t = 0;                  ///< 1-based forecast step
    double mean_distance = 0.0; ///< ||mean - truth||_w / ||mean||_w
    double spread = 0.0;        ///< mean member-to-mean relative distance
    double ces = 0.0;           ///< mean_distance + spread
    double ia = 0.0;            ///< fraction of members within tau of the mean
    double crps = 0.0;          ///< quadrature-weighted ensemble energy score
    bool within_tau = false;    ///< mean_distance <= tau
};

Field ensemble_mean(std::span<const Field> members);

StepDiagnostics step_diagnostics(std::span<const Field> members, const Field& truth,
                                 double tau, int t = 0);

/// Advances one member one forecast step from its own previous state.
using MemberStepper = std::function<Field(const Field& state, std::size_t member, int step)>;

struct RolloutDiagnostics {
    std::vector<StepDiagnostics> steps;
    int first_violation = -1; ///< first 1-based step with within_tau false
};

/// Advance every member autoregressively for `steps` steps and diagnose
/// each step against the truth trajectory (truth[t-1] is the state at
/// step t). Stepper failures propagate tagged with the step index.
RolloutDiagnostics rollout_diagnostics(std::vector<Field> members, const MemberStepper& advance,
                                       int steps, double tau, std::span<const Field> truth);

} // namespace fcp
