#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "liftcheck/rational.hpp"

namespace liftcheck {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed specs, unparsable polynomials, out-of-range parameters.
struct ConfigError : Error {
    using Error::Error;
};

struct PreconditionFailed : Error {
    using Error::Error;
};

struct NotEisenstein : Error {
    using Error::Error;
};

struct PrecisionExhausted : Error {
    using Error::Error;
};

struct ZeroInput : Error {
    using Error::Error;
};

struct IndeterminateAtPrecision : Error {
    using Error::Error;
};

struct RepeatedRoots : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct KrasnerFail : Error {
    KrasnerFail(const std::string& what, Rational threshold)
        : Error(what + " (threshold " + threshold.str() + ")"), threshold(threshold) {}
    Rational threshold;
};

struct DegreeMismatch : Error {
    using Error::Error;
};

struct NotClose : Error {
    using Error::Error;
};

struct NotSquarefree : Error {
    using Error::Error;
};

struct CapExceeded : Error {
    CapExceeded(const std::string& what, std::size_t partial)
        : Error(what + " (reached " + std::to_string(partial) + " elements)"), partial(partial) {}
    std::size_t partial;
};

struct SearchExhausted : Error {
    using Error::Error;
};

struct RuleMismatch : Error {
    using Error::Error;
};

struct NegativeDimension : Error {
    using Error::Error;
};

}  // namespace liftcheck
