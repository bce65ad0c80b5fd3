// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cvntcp/error.hpp"

namespace cvntcp {

using nlohmann::json;

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xFF);
    return r;
  }
  return v;
}

std::string header_json(const FieldSample& s, const char* encoding) {
  json h;
  h["dimension"] = s.cube.dimension;
  h["half_width"] = s.cube.half_width;
  h["count"] = s.values.size();
  h["seed"] = s.seed;
  h["model"] = json::parse(s.model.to_json());
  h["encoding"] = encoding;
  return h.dump();
}

}  // namespace

void save_field_sample(const FieldSample& sample, const std::string& path,
                       SampleEncoding encoding) {
  if (static_cast<std::int64_t>(sample.values.size()) != sample.cube.size())
    fail(ErrorKind::Shape, "sample value count does not match its cube");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");

  if (encoding == SampleEncoding::Binary) {
    out << kBinaryMagic << '\n' << header_json(sample, "f64le") << '\n';
    for (double v : sample.values) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  } else {
    out << kCsvMagic << ' ' << header_json(sample, "csv") << '\n';
    const std::int64_t row = sample.cube.side();
    char buf[32];
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", sample.values[i]);
      out << buf << ((static_cast<std::int64_t>(i) + 1) % row == 0 ? '\n' : ',');
    }
  }
  if (!out) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

FieldSample load_field_sample(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);

  std::string header_text;
  bool csv = false;
  if (first == kBinaryMagic) {
    std::getline(in, header_text);
  } else if (first.rfind(kCsvMagic, 0) == 0) {
    csv = true;
    header_text = first.substr(std::strlen(kCsvMagic));
  } else {
    fail(ErrorKind::Io, "'" + path + "' is not a field sample file");
  }

  FieldSample sample;
  std::size_t count = 0;
  try {
    const json h = json::parse(header_text);
    sample.cube.dimension = h.at("dimension").get<int>();
    sample.cube.half_width = h.at("half_width").get<std::int64_t>();
    sample.seed = h.at("seed").get<std::uint64_t>();
    count = h.at("count").get<std::size_t>();
    sample.model = FieldModel::from_json(h.at("model").dump());
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "malformed sample header in '" + path + "': " + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Io, "malformed sample header in '" + path + "': " + e.what());
  }
  sample.cube.validate();
  if (static_cast<std::int64_t>(count) != sample.cube.size())
    fail(ErrorKind::Io, "sample header count disagrees with its cube");
  sample.values.resize(count);

  if (!csv) {
    for (auto& v : sample.values) {
      std::uint64_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits))
        fail(ErrorKind::Io, "truncated sample data in '" + path + "'");
      v = std::bit_cast<double>(to_little_endian(bits));
    }
  } else {
    std::stringstream body;
    body << in.rdbuf();
    const std::string text = body.str();
    const char* p = text.c_str();
    for (auto& v : sample.values) {
      while (*p == ',' || *p == '\n' || *p == '\r' || *p == ' ') ++p;
      char* end = nullptr;
      v = std::strtod(p, &end);
      if (end == p)
        fail(ErrorKind::Io, "truncated sample data in '" + path + "'");
      p = end;
    }
  }
  return sample;
}

}  // namespace cvntcp
