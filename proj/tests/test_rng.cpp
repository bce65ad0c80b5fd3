// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "cvntcp/rng.hpp"

using cvntcp::Philox4x32;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  static_assert(Philox4x32::block({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5);
}

TEST_CASE("site uniforms") {
  double sum = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = cvntcp::site_uniform(7, i, -i, 3);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // standard error of the mean is 1/sqrt(12 count)
  CHECK(std::abs(sum / count - 0.5) < 5 / std::sqrt(12.0 * count));
  CHECK(cvntcp::site_uniform(1, 2, 3, 4) == cvntcp::site_uniform(1, 2, 3, 4));
  CHECK(cvntcp::site_uniform(1, 2, 3, 4) != cvntcp::site_uniform(2, 2, 3, 4));
  CHECK(cvntcp::site_uniform(1, -1, 0, 0) != cvntcp::site_uniform(1, 1, 0, 0));
}

TEST_CASE("replicate seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t n : {0, 1, 16, 3200})
    for (std::uint64_t r = 0; r < 1000; ++r)
      seen.insert(cvntcp::replicate_seed(42, n, r));
  CHECK(seen.size() == 4000);
  CHECK(cvntcp::replicate_seed(1, 2, 3) ==
        cvntcp::mix64(cvntcp::mix64(cvntcp::mix64(1) + 2) + 3));
}
