#pragma once

#include <stdexcept>

namespace trendboot {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration (parameters, presets, config files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid observation (non-finite values, malformed input records).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not defined for the given smoother kind.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Engine stepped beyond its configured end time.
class SequenceExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A test or band query issued before the first critical value exists.
class NotCalibrated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace trendboot
