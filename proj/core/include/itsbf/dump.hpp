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

#include <string>
#include <vector>

#include "itsbf/channel.hpp"
#include "itsbf/geometry.hpp"
#include "itsbf/model.hpp"
#include "itsbf/wmmse.hpp"

namespace itsbf {

// JSON dumps for plotting and cross-implementation comparison. Complex
// matrices are stored as {"rows", "cols", "re", "im"} with row-major data.

std::string layout_to_json(const ArrayLayout& layout);
void write_layout(const ArrayLayout& layout, const std::string& path);

struct ChannelDumpEntry {
  int trial = 0;
  std::uint64_t seed = 0;
  UserDrop drop;
  CMatrix channel;
};
std::string channel_dump_to_json(const std::vector<ChannelDumpEntry>& entries);
void write_channel_dump(const std::vector<ChannelDumpEntry>& entries, const std::string& path);
std::vector<ChannelDumpEntry> read_channel_dump(const std::string& path);

std::string solution_to_json(const SystemInstance& inst, const Solution& solution);
void write_solution(const SystemInstance& inst, const Solution& solution, const std::string& path);

std::string trace_to_json(const std::vector<BcdIteration>& log);
void write_trace(const std::vector<BcdIteration>& log, const std::string& path);

}  // namespace itsbf
