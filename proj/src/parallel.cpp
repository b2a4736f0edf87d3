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

#include "noma/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace noma {

int configured_threads()
{
    if (const char *env = std::getenv("NOMA_FORGE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1)
                return n;
        } catch (...) {
        }
    }
    return omp_get_max_threads();
}

void apply_thread_cap(int requested)
{
    omp_set_num_threads(requested >= 1 ? requested : configured_threads());
    omp_set_max_active_levels(1);
}

} // namespace noma
