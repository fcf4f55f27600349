#ifndef LOGNEWTON_ERRORS_HPP
#define LOGNEWTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lognewton {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidGrid : Error {
    using Error::Error;
};

struct BadExponent : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct ZeroField : Error {
    using Error::Error;
};

struct GridTooLarge : Error {
    using Error::Error;
};

// Amplitude fibering has no root (monotone case of the dichotomy).
struct NoNehariRoot : Error {
    using Error::Error;
};

// Dilation fibering scan found no sign change.
struct NoSignChange : Error {
    using Error::Error;
};

// Parameter regime does not admit the requested manifold / mode.
struct RegimeViolation : Error {
    using Error::Error;
};

struct ZeroInit : Error {
    using Error::Error;
};

struct Diverged : Error {
    using Error::Error;
};

struct Unbounded : Error {
    using Error::Error;
};

struct WindowEmpty : Error {
    using Error::Error;
};

struct NotConverged : Error {
    using Error::Error;
};

struct RegimeMismatch : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct CorruptField : Error {
    using Error::Error;
};

}  // namespace lognewton

#endif
