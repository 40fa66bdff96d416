#include "fcp/dataset.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "fcp/binary_io.hpp"
#include "fcp/errors.hpp"

namespace fcp {

namespace {

constexpr char kMagic[4] = {'F', 'C', 'P', 'D'};
constexpr std::uint32_t kVersion = 1;

} // namespace

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
    if (!data.grid) throw std::invalid_argument("write_dataset: null grid");
    if (data.inputs.size() != data.outputs.size()) {
        throw std::invalid_argument("write_dataset: input/output count mismatch");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_dataset: cannot open " + path.string());
    io::LeWriter w(os);

    w.bytes({kMagic, 4});
    w.u32(kVersion);
    const Grid& g = *data.grid;
    w.u8(static_cast<std::uint8_t>(g.dim()));
    for (std::size_t k = 0; k < g.dim(); ++k) w.u64(g.cells(k));
    w.u8(static_cast<std::uint8_t>(g.kind()));
    if (g.kind() == GridKind::Explicit) {
        for (std::size_t k = 0; k < g.dim(); ++k) {
            for (double e : g.edges(k)) w.f64(e);
        }
    }
    w.u64(data.inputs.size());
    for (std::size_t i = 0; i < data.inputs.size(); ++i) {
        if (!data.inputs[i].grid().same_geometry(g) ||
            !data.outputs[i].grid().same_geometry(g)) {
            throw std::invalid_argument("write_dataset: sample grids do not match");
        }
        for (double v : data.inputs[i].values()) w.f64(v);
        for (double v : data.outputs[i].values()) w.f64(v);
    }
    if (!os) throw std::runtime_error("write_dataset: write failed for " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_dataset: cannot open " + path.string());
    std::error_code ec;
    const auto file_size = std::filesystem::file_size(path, ec);
    io::LeReader r(is);

    char magic[4];
    r.bytes({magic, 4}, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw format_error("bad magic (expected FCPD)", 0);
    }
    const std::uint32_t version = r.u32("version");
    if (version != kVersion) {
        throw format_error("unsupported version " + std::to_string(version), 4);
    }
    const std::uint8_t ndim = r.u8("ndim");
    if (ndim == 0 || ndim > 8) throw format_error("implausible ndim", r.offset() - 1);
    std::vector<std::size_t> cells(ndim);
    for (auto& c : cells) {
        c = r.u64("cell count");
        if (c == 0) throw format_error("zero cell count", r.offset() - 8);
    }
    const std::uint8_t kind_raw = r.u8("grid kind");
    if (kind_raw > 3) throw format_error("unknown grid kind", r.offset() - 1);
    const auto kind = static_cast<GridKind>(kind_raw);

    GridPtr grid;
    if (kind == GridKind::Explicit) {
        std::vector<std::vector<double>> edges(ndim);
        for (std::size_t k = 0; k < ndim; ++k) {
            edges[k].resize(cells[k] + 1);
            for (auto& e : edges[k]) e = r.f64("edge");
        }
        grid = Grid::from_edges(std::move(edges));
    } else {
        grid = Grid::make(kind, cells);
    }

    const std::uint64_t count = r.u64("sample count");
    const std::size_t d = grid->total_cells();

    // exact length check before slurping samples
    const std::size_t expected = r.offset() + count * 2 * d * sizeof(double);
    if (!ec && file_size != expected) {
        throw format_error("file length mismatch: expected " + std::to_string(expected) +
                               " bytes, found " + std::to_string(file_size),
                           r.offset());
    }

    Dataset data;
    data.grid = grid;
    data.inputs.reserve(count);
    data.outputs.reserve(count);
    std::vector<double> buf(d);
    for (std::uint64_t i = 0; i < count; ++i) {
        for (auto& v : buf) v = r.f64("input sample");
        data.inputs.emplace_back(grid, buf);
        for (auto& v : buf) v = r.f64("output sample");
        data.outputs.emplace_back(grid, buf);
    }
    return data;
}

} // namespace fcp
