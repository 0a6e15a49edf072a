#pragma once

// Error taxonomy. Each class maps to a stable process exit code so that the
// command-line tool can report failures in a scriptable way:
//
//   0  success
//   2  ArgumentError   - bad flags, malformed configuration, out-of-domain call
//   3  ValidationError - input data fails its invariants (dipole files, ...)
//   4  NumericalError  - quadrature non-convergence, consistency-check failure

#include <stdexcept>
#include <string>

namespace padkit {

class Error : public std::runtime_error {
  public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}

    [[nodiscard]] int exit_code() const noexcept { return exit_code_; }

  private:
    int exit_code_;
};

/// Invalid argument, configuration, or out-of-domain request. Exit code 2.
class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string& msg) : Error(msg, 2) {}
};

/// A requested item (e.g. a carrier sub-band) does not exist. Exit code 2.
class NotFoundError : public ArgumentError {
  public:
    explicit NotFoundError(const std::string& msg) : ArgumentError(msg) {}
};

/// Input data violates a documented invariant. Exit code 3.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg, 3) {}
};

/// Numerical failure: non-converged quadrature, broken cross-check. Exit code 4.
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string& msg) : Error(msg, 4) {}
};

} // namespace padkit
