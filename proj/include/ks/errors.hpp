#pragma once

#include <stdexcept>
#include <string>

namespace ks {

// Input fails a documented precondition (malformed document, wrong mode,
// degenerate data).  CLI exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured size guard would be exceeded (dense Clifford rank, group
// closure bound, binomial blow-up).  CLI exit code 2.
struct GuardExceeded : std::runtime_error {
    explicit GuardExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical postcondition failed on data that passed validation.
// Indicates a bug or corrupted fixture.  CLI exit code 3.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

inline void check_invariant(bool ok, const std::string& msg) {
    if (!ok) throw InvariantViolation(msg);
}

} // namespace ks
