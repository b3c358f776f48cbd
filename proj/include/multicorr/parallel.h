// Copyright 2026 The multicorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace multicorr {

/// Worker count used by the parallel scans. Defaults to the hardware
/// concurrency; the MULTICORR_THREADS environment variable overrides it.
size_t thread_count();
void set_thread_count(size_t count);

/// Runs body(begin, end) over contiguous chunks of [0, total). Chunk
/// boundaries depend only on `total` and `chunk_size`, never on the worker
/// count, so callers writing into per-index slots get identical results for
/// any thread count.
void parallel_chunks(
    size_t total, size_t chunk_size, const std::function<void(size_t begin, size_t end)> &body);

}  // namespace multicorr
