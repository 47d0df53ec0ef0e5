// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace granule {

/// Base class for all granule errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema file rejected. `line` is 1-based; 0 means "whole file".
class SchemaError : public Error {
 public:
  SchemaError(int line, const std::string& message)
      : Error(line > 0 ? "schema line " + std::to_string(line) + ": " + message
                       : "schema: " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Malformed source template (unbalanced blocks, unknown placeholder, ...).
class TemplateError : public Error {
 public:
  using Error::Error;
};

/// Wire buffer read past the end or otherwise malformed.
class WireError : public Error {
 public:
  using Error::Error;
};

/// Synchronization protocol violation (e.g. update for an unknown uid).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Particle store contract violation (duplicate uid, ...).
class StoreError : public Error {
 public:
  using Error::Error;
};

/// Bad simulation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace granule
