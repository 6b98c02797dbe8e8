#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsrg60 {

/// An internal consistency check failed (e.g. a reverse partner is missing
/// from a catalog, or a fast filter disagrees with the full definition).
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; `offset` is the byte position of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace dsrg60
