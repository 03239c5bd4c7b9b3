#pragma once

#include <stdexcept>
#include <string>

namespace jetsolve {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user input. `field` names the offending configuration key when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : Error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A coefficient oracle threw or returned a non-finite value.
class OracleFailure : public Error {
public:
    using Error::Error;
};

// a(0,0,0) is not symmetric positive definite, or sampling found ξᵀaξ < λ|ξ|².
class EllipticityError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

} // namespace jetsolve
