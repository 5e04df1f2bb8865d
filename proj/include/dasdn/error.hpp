#pragma once

#include <stdexcept>
#include <string>

namespace dasdn {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// API called with arguments that make no sense (empty input, missing forward pass, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configuration value violates a module invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf encountered in a numerical kernel.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// On-disk data failed validation.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Internal bookkeeping inconsistent (e.g. a PatchSet whose origins do not fit).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace dasdn
