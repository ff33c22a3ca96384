#pragma once

#include <stdexcept>
#include <string>

namespace fttc {

/// Malformed input text (JSON syntax, non-canonical rationals, unknown names).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input parses but violates a structural requirement (invariants, shape).
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant broken during a computation.
class EngineError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An exhaustive enumeration would exceed its configured size guard.
class EnumerationBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fttc
