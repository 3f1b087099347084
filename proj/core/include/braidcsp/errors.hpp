#pragma once

#include <stdexcept>
#include <string>

namespace braidcsp {

/// Base class for all engine errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A variable, value or candidate reference that does not exist in the instance.
struct MalformedRef : Error {
    using Error::Error;
};

/// A state transition whose precondition does not hold (e.g. asserting a
/// value on an already decided variable).
struct IllegalTransition : Error {
    using Error::Error;
};

/// A pattern witness names a candidate that is no longer present in the
/// state it is validated against. Distinct from ordinary validation failure.
struct StaleWitness : Error {
    using Error::Error;
};

/// Malformed textual input (grids, corpus files, CLI specs).
struct ParseError : Error {
    using Error::Error;
};

/// Rating was requested for an instance without a unique solution.
struct RatingUndefined : Error {
    using Error::Error;
};

/// Witness extraction was asked for a trace that cannot yield one.
struct NoWitness : Error {
    using Error::Error;
};

} // namespace braidcsp
