// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "cvntcp/lattice.hpp"

namespace cvntcp {

// Sample files start with a magic line and a one-line JSON header
//   {"dimension":d,"half_width":n,"count":N,"seed":s,"model":{...},
//    "encoding":"f64le"|"csv"}
// followed either by N little-endian IEEE doubles (binary) or by the grid
// as text, one line per run of the last coordinate, values printed with 17
// significant digits. Both encodings round-trip bit-exactly.

enum class SampleEncoding { Binary, Csv };

inline constexpr const char* kBinaryMagic = "CVNTCP-FIELD 1";
inline constexpr const char* kCsvMagic = "# CVNTCP-FIELD 1";

void save_field_sample(const FieldSample& sample, const std::string& path,
                       SampleEncoding encoding = SampleEncoding::Binary);

/// Detects the encoding from the magic line.
FieldSample load_field_sample(const std::string& path);

}  // namespace cvntcp
