#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "fcp/grid.hpp"

namespace fcp {

/// Parameters of the random Fourier-mode fields used for data generation.
/// Sampling is a pure function of (seed), via the counter-based PRNG.
struct RandomFieldSpec {
    std::size_t n_modes = 4;      ///< max frequency per axis, >= 1
    double amplitude_decay = 1.0; ///< spectral decay exponent
    double amplitude = 1.0;       ///< overall scale; 0 degenerates to a constant
    std::optional<std::pair<double, double>> clip; ///< optional (lo, hi) bounds
    std::uint64_t seed = 0;
};

/// Log-normal permeability: exp of a random Fourier sum, clipped to
/// [0.01, 10] (or the spec's clip bounds). Strictly positive.
Field sample_permeability_1d(const RandomFieldSpec& spec, const GridPtr& grid);

/// Zero-mean random Fourier forcing on the unit square.
Field sample_forcing_2d(const RandomFieldSpec& spec, const GridPtr& grid);

/// Zero-mean Gaussian random field; mode (p, q) has standard deviation
/// amplitude * (1 + p^2 + q^2)^(-decay).
Field sample_grf_2d(const RandomFieldSpec& spec, const GridPtr& grid);

} // namespace fcp
