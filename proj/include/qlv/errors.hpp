#pragma once

#include <stdexcept>
#include <string>

namespace qlv {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A q-shifted-factorial denominator factor vanished (or came within the
// configured proximity threshold of vanishing).
class PoleError : public Error {
public:
    explicit PoleError(const std::string& what) : Error(what) {}
};

// Two x_i coincide (or nearly coincide), so the Vandermonde-type factor
// is degenerate.
class DegenerateXError : public Error {
public:
    explicit DegenerateXError(const std::string& what) : Error(what) {}
};

// Adaptive truncation exhausted max_radius without stabilizing.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, long radius, double last_diff)
        : Error(what), radius(radius), last_diff(last_diff) {}
    long radius = 0;
    double last_diff = 0.0;
};

// A parameter point violates the identity's convergence domain.
class DomainViolation : public Error {
public:
    explicit DomainViolation(const std::string& what) : Error(what) {}
};

// Exact-mode verification was requested for an identity that is not a
// finite rational identity.
class NotExactCapable : public Error {
public:
    explicit NotExactCapable(const std::string& what) : Error(what) {}
};

// Permutation sums are guarded at n <= 8.
class ArityTooLarge : public Error {
public:
    explicit ArityTooLarge(const std::string& what) : Error(what) {}
};

// The domain sampler could not find a feasible point within the retry
// budget (margins too aggressive for this identity/arity).
class InfeasibleAfterRetries : public Error {
public:
    explicit InfeasibleAfterRetries(const std::string& what) : Error(what) {}
};

// A sampling annulus shrank to the empty set; callers retry or give up.
class RangeEmpty : public Error {
public:
    explicit RangeEmpty(const std::string& what) : Error(what) {}
};

// Report/config I/O failure.
class IOError : public Error {
public:
    explicit IOError(const std::string& what) : Error(what) {}
};

// Malformed CLI usage or config file.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

}  // namespace qlv
