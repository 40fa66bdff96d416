#pragma once

#include <span>
#include <utility>

#include "fcp/grid.hpp"

namespace fcp {

/// Pointwise min/max envelope over ensemble members.
struct Envelope {
    Field lower;
    Field upper;
    std::size_t kept = 0; ///< members contributing to the envelope
};

/// Envelope of the members, optionally conditioned on the calibrated
/// threshold: a member contributes only when its relative weighted
/// distance to the reference (the ensemble mean by default) is <= tau.
/// The member closest to the reference is always retained, so the
/// envelope never empties at small tau.
Envelope mc_envelope(std::span<const Field> members, double tau, bool conditioned,
                     const Field* reference = nullptr);

/// Rescale quantile-triplet offsets so each bound sits at relative
/// weighted distance exactly tau from the central prediction:
/// adjusted = mid + (tau / r_initial) (bound - mid).
/// Throws degenerate_error for zero-norm mid or zero offsets.
std::pair<Field, Field> adjust_quantile_bounds(const Field& lo, const Field& mid,
                                               const Field& hi, double tau);

} // namespace fcp
