#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>

#include "fcp/errors.hpp"

namespace fcp::io {

/// Little-endian stream writers/readers. Reads track the byte offset so
/// format errors can name where the file went wrong.
class LeWriter {
public:
    explicit LeWriter(std::ostream& os) : os_(os) {}

    void bytes(std::span<const char> b) { os_.write(b.data(), static_cast<std::streamsize>(b.size())); }
    void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        os_.write(b, 4);
    }
    void u64(std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        os_.write(b, 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    std::ostream& os_;
};

class LeReader {
public:
    explicit LeReader(std::istream& is) : is_(is) {}

    std::size_t offset() const { return offset_; }

    void bytes(std::span<char> b, const char* what) {
        is_.read(b.data(), static_cast<std::streamsize>(b.size()));
        if (static_cast<std::size_t>(is_.gcount()) != b.size()) {
            throw format_error(std::string("truncated file while reading ") + what, offset_);
        }
        offset_ += b.size();
    }
    std::uint8_t u8(const char* what) {
        char b;
        bytes({&b, 1}, what);
        return static_cast<std::uint8_t>(b);
    }
    std::uint32_t u32(const char* what) {
        char b[4];
        bytes({b, 4}, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
        return v;
    }
    std::uint64_t u64(const char* what) {
        char b[8];
        bytes({b, 8}, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
        return v;
    }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

private:
    std::istream& is_;
    std::size_t offset_ = 0;
};

} // namespace fcp::io
