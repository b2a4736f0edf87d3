// SPDX-License-Identifier: Apache-2.0
//
// noma-forge: cluster-free multiple-antenna NOMA link-level simulator
// Copyright (C) 2026 The noma-forge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace noma {

// Serial is the reference path; parallel must produce identical results.
enum class Execution { serial, parallel };

// Thread cap from NOMA_FORGE_THREADS (unset or invalid: OpenMP default).
// A positive `requested` takes precedence.
int configured_threads();
void apply_thread_cap(int requested = 0);

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot. The first exception thrown by any index is rethrown after the loop.
template <class Body>
void for_each_index(Execution exec, std::size_t n, Body &&body)
{
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex guard;
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace noma
