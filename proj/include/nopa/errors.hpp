#ifndef NOPA_ERRORS_HPP
#define NOPA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nopa {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input: out-of-range argument, malformed or inconsistent
// configuration.  Maps to CLI exit code 1.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// The model has no answer for a structurally valid request: no solution in
// the search domain, degenerate geometry, singular or unstable operating
// point.  Maps to CLI exit code 2.
class ModelError : public Error {
public:
  explicit ModelError(const std::string& msg) : Error(msg) {}
};

}  // namespace nopa

#endif
