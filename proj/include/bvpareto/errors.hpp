#ifndef BVPARETO_ERRORS_HPP
#define BVPARETO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bvpareto {

// Base class for everything this library throws.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class domain_error : public error {
 public:
  using error::error;
};

// A point with equal standardized components was passed where the
// absolutely continuous law is required.
class diagonal_error : public error {
 public:
  explicit diagonal_error(const std::string& what, std::size_t index = npos)
      : error(what), index_(index) {}
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Intermediate quantity left the representable / model-valid range
// (underflowing denominators, zero M-step denominators, -inf log-likelihood).
class numeric_error : public error {
 public:
  using error::error;
};

// A truncated series failed to meet its tolerance within the term cap.
class nonconvergence_error : public error {
 public:
  using error::error;
};

// Data ingestion errors.
class io_error : public error {
 public:
  using error::error;
};

class schema_error : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bvpareto

#endif
