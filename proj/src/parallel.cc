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

#include "multicorr/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace multicorr {

namespace {

size_t default_thread_count() {
    if (const char *env = std::getenv("MULTICORR_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) {
                return static_cast<size_t>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return std::max<size_t>(1, std::thread::hardware_concurrency());
}

std::atomic<size_t> &thread_setting() {
    static std::atomic<size_t> value{default_thread_count()};
    return value;
}

}  // namespace

size_t thread_count() {
    return thread_setting().load();
}

void set_thread_count(size_t count) {
    thread_setting().store(std::max<size_t>(1, count));
}

void parallel_chunks(size_t total, size_t chunk_size, const std::function<void(size_t, size_t)> &body) {
    if (total == 0) {
        return;
    }
    chunk_size = std::max<size_t>(1, chunk_size);
    size_t num_chunks = (total + chunk_size - 1) / chunk_size;
    size_t workers = std::min(thread_count(), num_chunks);
    if (workers <= 1) {
        for (size_t c = 0; c < num_chunks; c++) {
            body(c * chunk_size, std::min(total, (c + 1) * chunk_size));
        }
        return;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            size_t c = next.fetch_add(1);
            if (c >= num_chunks) {
                return;
            }
            try {
                body(c * chunk_size, std::min(total, (c + 1) * chunk_size));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (size_t w = 1; w < workers; w++) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace multicorr
