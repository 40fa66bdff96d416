#include "fcp/intervals.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fcp/errors.hpp"

namespace fcp {

Envelope mc_envelope(std::span<const Field> members, double tau, bool conditioned,
                     const Field* reference) {
    if (members.empty()) throw std::invalid_argument("mc_envelope: empty member list");
    const GridPtr grid = members[0].grid_ptr();
    for (const auto& m : members) {
        if (!m.grid().same_geometry(*grid)) {
            throw std::invalid_argument("mc_envelope: members live on different grids");
        }
    }
    if (conditioned && !(tau > 0.0)) {
        throw std::invalid_argument("mc_envelope: conditioned envelope needs tau > 0");
    }

    std::vector<bool> keep(members.size(), true);
    std::size_t kept = members.size();
    if (conditioned) {
        Field ref = [&] {
            if (reference) {
                if (!reference->grid().same_geometry(*grid)) {
                    throw std::invalid_argument("mc_envelope: reference grid mismatch");
                }
                return *reference;
            }
            std::vector<double> acc(grid->total_cells(), 0.0);
            for (const auto& m : members) {
                const auto v = m.values();
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
            }
            for (double& v : acc) v /= static_cast<double>(members.size());
            return Field(grid, std::move(acc));
        }();
        const double ref_norm = weighted_norm(ref);
        if (ref_norm == 0.0) {
            throw degenerate_error("mc_envelope: reference has zero norm");
        }
        kept = 0;
        std::size_t closest = 0;
        double closest_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < members.size(); ++j) {
            const double d = weighted_distance(members[j], ref) / ref_norm;
            keep[j] = d <= tau;
            if (keep[j]) ++kept;
            if (d < closest_dist) {
                closest_dist = d;
                closest = j;
            }
        }
        if (kept == 0) {
            keep[closest] = true;
            kept = 1;
        }
    }

    std::vector<double> lo(grid->total_cells(), std::numeric_limits<double>::infinity());
    std::vector<double> hi(grid->total_cells(), -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (!keep[j]) continue;
        const auto v = members[j].values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    }
    return Envelope{Field(grid, std::move(lo)), Field(grid, std::move(hi)), kept};
}

std::pair<Field, Field> adjust_quantile_bounds(const Field& lo, const Field& mid,
                                               const Field& hi, double tau) {
    if (!lo.grid().same_geometry(mid.grid()) || !hi.grid().same_geometry(mid.grid())) {
        throw std::invalid_argument("adjust_quantile_bounds: grids do not match");
    }
    const double mid_norm = weighted_norm(mid);
    if (mid_norm == 0.0) {
        throw degenerate_error("adjust_quantile_bounds: central prediction has zero norm");
    }
    const auto adjust = [&](const Field& bound) {
        const double r_initial = weighted_distance(bound, mid) / mid_norm;
        if (r_initial == 0.0) {
            throw degenerate_error(
                "adjust_quantile_bounds: bound coincides with the central prediction");
        }
        const double s = tau / r_initial;
        return field_axpy(mid, s, field_subtract(bound, mid));
    };
    return {adjust(lo), adjust(hi)};
}

} // namespace fcp
