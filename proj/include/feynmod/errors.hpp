// Exception taxonomy shared by every feynmod module.
#ifndef FEYNMOD_ERRORS_HPP
#define FEYNMOD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace feynmod {

// Requested precision outside the supported range.
struct invalid_precision : std::invalid_argument {
    explicit invalid_precision(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside a function's mathematical domain (division by a ball
// containing zero, tau in the lower half plane, negative sqrt operand, ...).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// An iteration (Newton, continued fraction, series with a term cap) failed to
// reach the requested tolerance within its budget.
struct convergence_failure : std::runtime_error {
    explicit convergence_failure(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation was requested too close to a pole of the function.
struct pole_error : std::runtime_error {
    explicit pole_error(const std::string& what) : std::runtime_error(what) {}
};

// A mandatory internal cross-check failed (e.g. two independent
// constructions of the same series disagree).  Never caught and ignored.
struct verification_error : std::logic_error {
    explicit verification_error(const std::string& what) : std::logic_error(what) {}
};

// Cache file could not be read, written, or atomically replaced.
struct cache_io_error : std::runtime_error {
    explicit cache_io_error(const std::string& what) : std::runtime_error(what) {}
};

// Command line could not be interpreted.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace feynmod

#endif
