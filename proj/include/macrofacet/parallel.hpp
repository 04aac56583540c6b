// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace macrofacet {

// Worker count: MACROFACET_THREADS when set to a positive integer, otherwise
// the hardware concurrency. `requested` > 0 overrides both.
int worker_count(int requested = 0);

// Calls body(i) for i in [0, n) on up to `workers` threads. Items are handed
// out dynamically, so the body must only write to item-owned state. The
// first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace macrofacet
