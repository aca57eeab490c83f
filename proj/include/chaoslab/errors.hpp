#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (bad coefficient,
/// point outside the interval, violated precondition).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested enclosure width cannot be reached within the configured
/// truncation / subdivision limits.
class ToleranceUnreachable : public Error {
 public:
  using Error::Error;
};

/// A construction cannot certify its target distance.
class InfeasibleTolerance : public Error {
 public:
  using Error::Error;
};

/// A certificate could not be closed strictly (interval widths too large).
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoslab
