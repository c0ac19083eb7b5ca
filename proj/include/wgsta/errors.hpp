#pragma once

#include <stdexcept>
#include <string>

namespace wgsta {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Untagged evaluation exactly on the z = 0 mismatch jump.
class DiscontinuityError : public ArgumentError {
public:
    explicit DiscontinuityError(double z)
        : ArgumentError("mismatch is discontinuous at z = " + std::to_string(z) +
                        "; request a one-sided value (Side::left or Side::right)") {}
};

// Mixing angle requested for omega = delta = 0.
class UndefinedAngleError : public ArgumentError {
public:
    UndefinedAngleError() : ArgumentError("mixing angle is undefined for omega = delta = 0") {}
};

class CalibrationError : public ArgumentError {
public:
    enum class Reason { infinite_separation, outside_domain };

    CalibrationError(Reason reason, const std::string& what) : ArgumentError(what), reason_(reason) {}

    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

// The integrator or a downstream computation could not produce a result.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace wgsta
