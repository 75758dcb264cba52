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

#include "forestprune/baselines.hpp"
#include "forestprune/compare.hpp"
#include "forestprune/dataset.hpp"
#include "forestprune/depth_diff.hpp"
#include "forestprune/ensemble.hpp"
#include "forestprune/io.hpp"
#include "forestprune/polish.hpp"
#include "forestprune/problem.hpp"
#include "forestprune/solver.hpp"
#include "forestprune/synthetic.hpp"
#include "forestprune/tree.hpp"
#include "forestprune/weights.hpp"
