#include "fcp/forecast.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fcp/errors.hpp"

namespace fcp {

Field ensemble_mean(std::span<const Field> members) {
    if (members.empty()) throw std::invalid_argument("ensemble_mean: empty member list");
    const GridPtr grid = members[0].grid_ptr();
    std::vector<double> acc(grid->total_cells(), 0.0);
    for (const auto& m : members) {
        if (!m.grid().same_geometry(*grid)) {
            throw std::invalid_argument("ensemble_mean: members live on different grids");
        }
        const auto v = m.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    for (double& v : acc) v /= static_cast<double>(members.size());
    return Field(grid, std::move(acc));
}

StepDiagnostics step_diagnostics(std::span<const Field> members, const Field& truth,
                                 double tau, int t) {
    const Field mean = ensemble_mean(members);
    const double mean_norm = weighted_norm(mean);
    if (mean_norm == 0.0) {
        throw degenerate_error("step_diagnostics: ensemble mean has zero norm");
    }

    StepDiagnostics d;
    d.t = t;
    d.mean_distance = weighted_distance(mean, truth) / mean_norm;

    std::size_t inside = 0;
    for (const auto& m : members) {
        const double dist = weighted_distance(m, mean) / mean_norm;
        d.spread += dist;
        if (dist <= tau) ++inside;
    }
    d.spread /= static_cast<double>(members.size());
    d.ces = d.mean_distance + d.spread;
    d.ia = static_cast<double>(inside) / static_cast<double>(members.size());
    d.within_tau = d.mean_distance <= tau;

    // CRPS by the pointwise ensemble energy form, averaged with the
    // quadrature weights (which sum to one).
    const auto w = truth.grid().weights();
    const auto y = truth.values();
    const std::size_t n = members.size();
    for (std::size_t i = 0; i < y.size(); ++i) {
        double to_truth = 0.0;
        double between = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double vj = members[j][i];
            to_truth += std::abs(vj - y[i]);
            for (std::size_t k = 0; k < n; ++k) {
                between += std::abs(vj - members[k][i]);
            }
        }
        const double nd = static_cast<double>(n);
        d.crps += w[i] * (to_truth / nd - between / (2.0 * nd * nd));
    }
    return d;
}

RolloutDiagnostics rollout_diagnostics(std::vector<Field> members, const MemberStepper& advance,
                                       int steps, double tau, std::span<const Field> truth) {
    if (members.empty()) throw std::invalid_argument("rollout_diagnostics: no members");
    if (static_cast<int>(truth.size()) < steps) {
        throw std::invalid_argument("rollout_diagnostics: truth trajectory shorter than steps");
    }
    RolloutDiagnostics out;
    out.steps.reserve(static_cast<std::size_t>(steps));
    for (int t = 1; t <= steps; ++t) {
        for (std::size_t j = 0; j < members.size(); ++j) {
            try {
                members[j] = advance(members[j], j, t);
            } catch (const std::exception& e) {
                throw numeric_error("rollout_diagnostics: stepper failed at step " +
                                    std::to_string(t) + ": " + e.what());
            }
        }
        out.steps.push_back(
            step_diagnostics(members, truth[static_cast<std::size_t>(t - 1)], tau, t));
        if (out.first_violation < 0 && !out.steps.back().within_tau) {
            out.first_violation = t;
        }
    }
    return out;
}

} // namespace fcp
