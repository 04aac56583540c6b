// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace macrofacet {

// PCG32 (O'Neill) keyed by (seed, stream id). Both keys pass through
// SplitMix64 first so that neighbouring pixel or realization indices select
// unrelated increments. Single owner; never shared between threads.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint32_t next_u32();

    // Uniform in [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via Box-Muller (no cached second value, so the
    // sequence depends only on the number of calls).
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

  private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace macrofacet
