// Copyright 2026 The Coalesce Authors
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

#ifndef COALESCE_PARALLEL_HPP_
#define COALESCE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace coalesce {

// Thread count to use: COALESCE_THREADS when set, else `requested`, where 0
// means all hardware threads.
int ResolveThreads(int requested);

// Calls fn(i) for every i in [0, n). Workers claim indices dynamically; the
// caller must write results by index so the outcome is schedule-free. The
// exception from the lowest failing index is rethrown.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace coalesce

#endif  // COALESCE_PARALLEL_HPP_
