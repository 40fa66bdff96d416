#include "fcp/model_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fcp/binary_io.hpp"
#include "fcp/errors.hpp"

namespace fcp {

namespace {

constexpr char kMagic[4] = {'F', 'C', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kKindOperator = 0;
constexpr std::uint8_t kKindTriplet = 1;

void write_operator_block(io::LeWriter& w, const SpectralOperator& op) {
    w.u8(static_cast<std::uint8_t>(op.dim));
    w.u64(op.modes);
    for (std::size_t k = 0; k < op.dim; ++k) w.u64(op.train_cells[k]);
    w.f64(op.ridge);
    w.f64(op.fit_residual);
    w.u64(static_cast<std::uint64_t>(op.coef.rows()));
    w.u64(static_cast<std::uint64_t>(op.coef.cols()));
    for (Eigen::Index r = 0; r < op.coef.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.coef.cols(); ++c) {
            w.f64(op.coef(r, c).real());
            w.f64(op.coef(r, c).imag());
        }
    }
}

SpectralOperator read_operator_block(io::LeReader& r) {
    SpectralOperator op;
    op.dim = r.u8("operator dim");
    if (op.dim == 0 || op.dim > 2) throw format_error("implausible operator dim", r.offset() - 1);
    op.modes = r.u64("modes");
    op.train_cells.resize(op.dim);
    for (auto& c : op.train_cells) c = r.u64("train cells");
    op.ridge = r.f64("ridge");
    op.fit_residual = r.f64("fit residual");
    const std::uint64_t rows = r.u64("rows");
    const std::uint64_t cols = r.u64("cols");
    const std::uint64_t k = op.coeff_count();
    if (rows != k + 1 || cols != k) {
        throw format_error("coefficient shape does not match the mode header", r.offset() - 8);
    }
    op.coef.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index rr = 0; rr < op.coef.rows(); ++rr) {
        for (Eigen::Index cc = 0; cc < op.coef.cols(); ++cc) {
            const double re = r.f64("coefficient");
            const double im = r.f64("coefficient");
            op.coef(rr, cc) = std::complex<double>(re, im);
        }
    }
    return op;
}

void open_and_check(std::ifstream& is, io::LeReader& r, std::uint8_t expected_kind) {
    char magic[4];
    r.bytes({magic, 4}, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) throw format_error("bad magic (expected FCPM)", 0);
    const auto version = r.u32("version");
    if (version != kVersion) {
        throw format_error("unsupported version " + std::to_string(version), 4);
    }
    const auto kind = r.u8("payload kind");
    if (kind != expected_kind) throw format_error("unexpected payload kind", 8);
    (void)is;
}

} // namespace

void save_operator(const std::filesystem::path& path, const SpectralOperator& op) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_operator: cannot open " + path.string());
    io::LeWriter w(os);
    w.bytes({kMagic, 4});
    w.u32(kVersion);
    w.u8(kKindOperator);
    write_operator_block(w, op);
    if (!os) throw std::runtime_error("save_operator: write failed");
}

SpectralOperator load_operator(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_operator: cannot open " + path.string());
    io::LeReader r(is);
    open_and_check(is, r, kKindOperator);
    return read_operator_block(r);
}

void save_triplet(const std::filesystem::path& path, const TripletPredictor& triplet) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_triplet: cannot open " + path.string());
    io::LeWriter w(os);
    w.bytes({kMagic, 4});
    w.u32(kVersion);
    w.u8(kKindTriplet);
    w.f64(triplet.q_lo);
    w.f64(triplet.q_hi);
    write_operator_block(w, triplet.lo);
    write_operator_block(w, triplet.mid);
    write_operator_block(w, triplet.hi);
    if (!os) throw std::runtime_error("save_triplet: write failed");
}

TripletPredictor load_triplet(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_triplet: cannot open " + path.string());
    io::LeReader r(is);
    open_and_check(is, r, kKindTriplet);
    TripletPredictor t;
    t.q_lo = r.f64("q_lo");
    t.q_hi = r.f64("q_hi");
    t.lo = read_operator_block(r);
    t.mid = read_operator_block(r);
    t.hi = read_operator_block(r);
    return t;
}

} // namespace fcp
