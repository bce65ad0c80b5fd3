// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/error.hpp"

namespace cvntcp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Degenerate: return "degenerate distribution";
    case ErrorKind::Unattainable: return "unattainable target";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Config: return "configuration error";
  }
  return "unknown error";
}

}  // namespace cvntcp
