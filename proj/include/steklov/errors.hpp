#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

// Base for all toolkit errors so callers can catch one type at the CLI edge.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryError : Error {
    using Error::Error;
};

// Requested output depth exceeds what the inputs can populate.
struct TruncationError : Error {
    TruncationError(const std::string& what, double missing_order)
        : Error(what), missing_order(missing_order) {}
    double missing_order;
};

struct EllipticityError : Error {
    using Error::Error;
};

// Principal symbol fails the required even/odd branch symmetry.
struct SymmetryError : Error {
    using Error::Error;
};

struct SelfAdjointnessError : Error {
    using Error::Error;
};

struct ConventionError : Error {
    using Error::Error;
};

struct CommensurabilityError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct ModelMismatchError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace steklov
