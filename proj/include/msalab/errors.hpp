#pragma once

#include <stdexcept>
#include <string>

namespace msalab {

// Every failure raised by the library derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class InvalidInput : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-input"; }
};

class OutOfDomain : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "out-of-domain"; }
};

class ResonantEnergy : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resonant-energy"; }
};

class NumericError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numeric"; }
};

class InfeasibleSchedule : public Error {
public:
    InfeasibleSchedule(const std::string& what, int first_bad_scale)
        : Error(what), first_bad_scale_(first_bad_scale) {}
    const char* kind() const noexcept override { return "infeasible-schedule"; }
    int first_bad_scale() const noexcept { return first_bad_scale_; }

private:
    int first_bad_scale_;
};

class PlacementError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "placement"; }
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

}  // namespace msalab
