#pragma once

#include <stdexcept>
#include <string>

namespace haarlib {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element failed its group's membership test, or two elements of
/// different groups were combined.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A chart parameter or support box touches a singular locus or leaves the
/// chart box.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit max_refinements without meeting rel_tol.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double last_difference)
      : Error(what), last_estimate_(last_estimate), last_difference_(last_difference) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double last_difference() const noexcept { return last_difference_; }

 private:
  double last_estimate_;
  double last_difference_;
};

/// Bad run configuration: unknown identifiers, malformed values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace haarlib
