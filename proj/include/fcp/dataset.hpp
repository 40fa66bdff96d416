#pragma once

#include <filesystem>
#include <vector>

#include "fcp/grid.hpp"

namespace fcp {

/// Matched (input, output) field pairs on one grid.
struct Dataset {
    GridPtr grid;
    std::vector<Field> inputs;
    std::vector<Field> outputs;

    std::size_t size() const { return inputs.size(); }
};

/// FCPD v1 binary layout, all integers and floats little-endian:
///   magic "FCPD" | version u32 = 1 | ndim u8 | cell counts u64 x ndim |
///   grid kind u8 (0 uniform, 1 center, 2 boundary, 3 explicit) |
///   [explicit only: per-dim edge arrays f64 x (N_k + 1)] |
///   sample count u64 | per sample: input then output, d f64 row-major.
/// Reads validate magic, version, and exact file length; violations
/// raise format_error carrying the byte offset.
void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);

} // namespace fcp
