#pragma once

#include <filesystem>

#include "fcp/surrogate.hpp"

namespace fcp {

/// Fitted-predictor binary formaters, magic "FCPM" version 1: shape
/// header (dim, modes, training cells, ridge, fit residual, matrix rows
/// and columns) followed by the complex coefficients as interleaved
/// little-endian 64-bit floats. Triplet files store the quantile levels
/// and three operator blocks.
void save_operator(const std::filesystem::path& path, const SpectralOperator& op);
SpectralOperator load_operator(const std::filesystem::path& path);

void save_triplet(const std::filesystem::path& path, const TripletPredictor& triplet);
TripletPredictor load_triplet(const std::filesystem::path& path);

} // namespace fcp
