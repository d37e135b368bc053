#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace randbench {

/// A precondition on an argument was violated.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A query fell outside the domain a built structure supports.
class OutOfDomain : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed serialized data; `offset` is the byte position where decoding failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The remote side of a protocol failed to answer (distinct from a negative verdict).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A randomized search ran out of its attempt budget.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant did not hold. Always a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace randbench
