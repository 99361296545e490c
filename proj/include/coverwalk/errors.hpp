#pragma once

#include <stdexcept>
#include <string>

namespace coverwalk {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad spec fields, unparsable numbers, unknown states.
struct InputError : Error {
    using Error::Error;
};

/// A structural invariant of a constructed object fails (row sums, detailed
/// balance, marginals, PSD-ness, ...). Message names the first offender.
struct ValidationError : Error {
    using Error::Error;
};

/// Operation is well-formed but mathematically undefined for this argument
/// (zero-probability conditioning event, empty slice, zero generator, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A transportation problem required by a coupling construction has no
/// feasible plan. Carries a Hall-type violator description.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Estimation routines that could not produce any admissible iterate.
struct EstimationError : Error {
    using Error::Error;
};

} // namespace coverwalk
