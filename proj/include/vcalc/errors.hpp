#ifndef VCALC_ERRORS_HPP
#define VCALC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vcalc {

// Argument outside the domain of a (partial) operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Caller violated a shape or index precondition.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A rounded operation produced NaN; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class SingularMatrixError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoSolutionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnknownSolutionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoBoundError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IntegrationFailure : public std::runtime_error {
  public:
    IntegrationFailure(const std::string& what, std::size_t step = 0)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace vcalc

#endif
