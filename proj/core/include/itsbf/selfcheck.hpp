// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The itsbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <ostream>

#include "itsbf/model.hpp"
#include "itsbf/rng.hpp"

namespace itsbf {

// i.i.d. CN(0, 1) transfer and channel matrices with unit weights; the budget
// is scaled so that typical constraints are active.
SystemInstance random_instance(int m, int n, int k, ConstraintKind kind, Rng& rng, double noise_power = 0.1,
                               double p_max = 1.0);

// Quick invariant checks on random instances; prints one line per check.
bool run_selfcheck(std::ostream& out, std::uint64_t seed);

}  // namespace itsbf
