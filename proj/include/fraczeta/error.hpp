#ifndef FRACZETA_ERROR_HPP
#define FRACZETA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fraczeta {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model/decimation data or a violated parameter invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A requested evaluation lies outside the region where the method is valid
/// (e.g. direct summation left of the abscissa of convergence, a point too
/// close to a pole, or a shift that breaks the principal branch).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A request that would exceed a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraczeta

#endif  // FRACZETA_ERROR_HPP
