#pragma once

#include <stdexcept>
#include <string>

namespace fcp {

/// Numerical failure: non-finite values, blow-up, singular systems.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method exhausted its budget before reaching tolerance.
class convergence_error : public numeric_error {
public:
    convergence_error(const std::string& what, double final_residual)
        : numeric_error(what), residual_(final_residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Operation is well-posed only for nonzero denominators/offsets; the
/// caller decides the fallback.
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed binary file (bad magic, version, or truncation).
class format_error : public std::runtime_error {
public:
    format_error(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}
    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

} // namespace fcp
