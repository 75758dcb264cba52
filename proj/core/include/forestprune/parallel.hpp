// Copyright 2026 The ForestPrune Authors
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

#include <functional>

#include "forestprune/common.hpp"

namespace forestprune {

// Worker count: hardware concurrency, capped by FORESTPRUNE_THREADS if set.
int thread_count();

// Runs fn(i) for i in [0, n) across thread_count() workers. Iterations must be
// independent. The first exception thrown is rethrown on the caller.
void parallel_for(Index n, const std::function<void(Index)>& fn);

}  // namespace forestprune
