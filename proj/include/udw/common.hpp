#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace udw {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double PI = std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad or inconsistent input; `path` names the offending config field when known
struct ConfigError : Error {
    std::string path;
    ConfigError(std::string p, const std::string& msg)
        : Error(p.empty() ? msg : p + ": " + msg), path(std::move(p)) {}
};

struct UnsupportedError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// numerics went somewhere they should not (coincident points, zero probability, ...)
struct NumericGuardError : Error {
    using Error::Error;
};

struct ZeroProbabilityError : NumericGuardError {
    using NumericGuardError::NumericGuardError;
};

struct PerturbativeValidityError : NumericGuardError {
    using NumericGuardError::NumericGuardError;
};

} // namespace udw
