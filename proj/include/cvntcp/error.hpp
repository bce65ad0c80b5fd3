// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cvntcp {

enum class ErrorKind {
  Parameter,     // invalid model parameters
  Domain,        // argument outside the mathematical domain
  Shape,         // length / region / cube mismatch
  Degenerate,    // zero variance, p in {0,1}, ...
  Unattainable,  // inversion target cannot be reached
  Capacity,      // allocation over the configured cell cap
  Io,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, ErrorKind kind, const char* what) {
  if (!ok) fail(kind, what);
}

}  // namespace cvntcp
