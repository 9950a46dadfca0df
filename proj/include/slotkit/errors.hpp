#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slotkit {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NonPositiveDepth : Error {
    using Error::Error;
};
struct OutOfBounds : Error {
    using Error::Error;
};
struct FrameMismatch : Error {
    using Error::Error;
};
struct BehindCamera : Error {
    using Error::Error;
};

// scene
struct DegenerateScene : Error {
    using Error::Error;
};

// marker / pipeline
struct NoMarker : Error {
    using Error::Error;
};
struct DepthHole : Error {
    using Error::Error;
};

// constraint language
struct ParseError : Error {
    ParseError(std::string msg, std::size_t position, std::string expected_tokens)
        : Error(format(msg, position, expected_tokens)),
          pos(position),
          expected(std::move(expected_tokens)) {}

    std::size_t pos;       // byte offset into the source text
    std::string expected;  // human-readable expected-token set

private:
    static std::string format(const std::string& msg, std::size_t position,
                              const std::string& expected) {
        std::string s = msg + " at offset " + std::to_string(position);
        if (!expected.empty()) s += " (expected " + expected + ")";
        return s;
    }
};

struct UnknownReference : Error {
    using Error::Error;
};
struct UnsatisfiableOnScene : Error {
    using Error::Error;
};

// remote backend
struct TransportError : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct BackendRefusal : Error {
    using Error::Error;
};

// file formats / CLI configuration
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace slotkit
