#include "fcp/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcp/rng.hpp"

namespace fcp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Sum of random Fourier modes over the half-plane {p > 0} u {p = 0, q > 0},
// which spans all real zero-mean band-limited fields without double
// counting conjugate pairs.
Field random_fourier_2d(const RandomFieldSpec& spec, const GridPtr& grid) {
    if (grid->dim() != 2) {
        throw std::invalid_argument("random Fourier field: grid must be 2D");
    }
    if (spec.n_modes == 0) {
        throw std::invalid_argument("random Fourier field: n_modes must be >= 1");
    }
    CounterRng rng(spec.seed);
    const auto cx = grid->centers(0);
    const auto cy = grid->centers(1);
    const std::size_t nx = cx.size();
    const std::size_t ny = cy.size();
    std::vector<double> v(nx * ny, 0.0);
    const int modes = static_cast<int>(spec.n_modes);
    for (int p = 0; p <= modes; ++p) {
        for (int q = -modes; q <= modes; ++q) {
            if (p == 0 && q <= 0) continue;
            const double k2 = static_cast<double>(p * p + q * q);
            const double amp = spec.amplitude * std::pow(1.0 + k2, -spec.amplitude_decay);
            const double gc = amp * rng.next_gaussian();
            const double gs = amp * rng.next_gaussian();
            for (std::size_t i = 0; i < nx; ++i) {
                const double px = kTwoPi * p * cx[i];
                for (std::size_t j = 0; j < ny; ++j) {
                    const double phase = px + kTwoPi * q * cy[j];
                    v[i * ny + j] += gc * std::cos(phase) + gs * std::sin(phase);
                }
            }
        }
    }
    return Field(grid, std::move(v));
}

} // namespace

Field sample_permeability_1d(const RandomFieldSpec& spec, const GridPtr& grid) {
    if (grid->dim() != 1) {
        throw std::invalid_argument("sample_permeability_1d: grid must be 1D");
    }
    const auto bounds = spec.clip.value_or(std::make_pair(0.01, 10.0));
    if (!(bounds.first < bounds.second)) {
        throw std::invalid_argument("sample_permeability_1d: clip.lo must be < clip.hi");
    }
    CounterRng rng(spec.seed);
    const auto cx = grid->centers(0);
    std::vector<double> v(cx.size(), 0.0);
    for (std::size_t m = 1; m <= spec.n_modes; ++m) {
        const double amp =
            spec.amplitude * std::pow(static_cast<double>(m), -spec.amplitude_decay);
        const double gc = amp * rng.next_gaussian();
        const double gs = amp * rng.next_gaussian();
        for (std::size_t i = 0; i < cx.size(); ++i) {
            const double phase = kTwoPi * static_cast<double>(m) * cx[i];
            v[i] += gc * std::cos(phase) + gs * std::sin(phase);
        }
    }
    for (double& x : v) {
        x = std::clamp(std::exp(x), bounds.first, bounds.second);
    }
    return Field(grid, std::move(v));
}

Field sample_forcing_2d(const RandomFieldSpec& spec, const GridPtr& grid) {
    return random_fourier_2d(spec, grid);
}

Field sample_grf_2d(const RandomFieldSpec& spec, const GridPtr& grid) {
    return random_fourier_2d(spec, grid);
}

} // namespace fcp
