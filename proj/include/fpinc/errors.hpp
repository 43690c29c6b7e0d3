#pragma once

#include <stdexcept>
#include <string>

namespace fpinc {

// Bad input: violated operation precondition, malformed file, out-of-range
// parameter. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant: a step the underlying counting argument
// guarantees failed to hold. Maps to CLI exit code 3 and is never raised
// by bad input alone.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

#define FPINC_REQUIRE(cond, msg)                                               \
    do {                                                                       \
        if (!(cond)) throw ::fpinc::DataError(msg);                            \
    } while (0)

#define FPINC_CHECK(cond, msg)                                                 \
    do {                                                                       \
        if (!(cond))                                                           \
            throw ::fpinc::InternalError(std::string("internal check failed: ") + msg); \
    } while (0)

} // namespace fpinc
