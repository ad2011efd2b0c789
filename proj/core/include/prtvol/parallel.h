// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace prtvol {

/// Resolves a requested thread count: 0 means hardware concurrency.
int resolve_threads(int requested);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Items are
/// claimed dynamically; callers write results to per-index slots so output
/// never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace prtvol
