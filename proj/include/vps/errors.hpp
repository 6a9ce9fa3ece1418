#pragma once

#include <stdexcept>
#include <string>

namespace vps {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept = 0;
};

#define VPS_DEFINE_ERROR(Name)                                             \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(what) {}            \
        const char* kind() const noexcept override { return #Name; }       \
    };

VPS_DEFINE_ERROR(NonZeroMean)
VPS_DEFINE_ERROR(GridMismatch)
VPS_DEFINE_ERROR(InvalidArgument)
VPS_DEFINE_ERROR(NoConvergence)
VPS_DEFINE_ERROR(BoundViolation)
VPS_DEFINE_ERROR(OutOfRange)
VPS_DEFINE_ERROR(MissingCovectors)
VPS_DEFINE_ERROR(DegenerateInput)
VPS_DEFINE_ERROR(IoError)

#undef VPS_DEFINE_ERROR

/// Newton/back-off failure; carries the step index when raised from a run.
class StepFailed : public Error {
public:
    explicit StepFailed(const std::string& what, long step = -1)
        : Error(what), step_(step) {}
    const char* kind() const noexcept override { return "StepFailed"; }
    long step() const noexcept { return step_; }

private:
    long step_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    const char* kind() const noexcept override { return "ParseError"; }
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Names the violated invariant, e.g. "dt" or "γ·κ = 0".
class ValidationError : public Error {
public:
    ValidationError(const std::string& invariant, const std::string& detail = "")
        : Error(detail.empty() ? invariant : invariant + ": " + detail),
          invariant_(invariant) {}
    const char* kind() const noexcept override { return "ValidationError"; }
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

}  // namespace vps
