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

#include "itsbf/harness.hpp"

namespace itsbf {

inline constexpr const char* kResultsHeader =
    "sweep,sweep_value,trial,method,illumination,constraint,wsr,iterations,wall_time_ms,seed";

struct CsvOptions {
  // Wall-clock timings differ between runs; they are left blank unless
  // requested so that identical runs produce identical files.
  bool include_timing = false;
};

std::string format_results(const std::vector<ResultRecord>& records, const CsvOptions& options = {});
void write_results(const std::vector<ResultRecord>& records, const std::string& path,
                   const CsvOptions& options = {});

std::vector<ResultRecord> parse_results(const std::string& text);
std::vector<ResultRecord> read_results(const std::string& path);

// Emits a matplotlib script that plots the summary rows of csv_path: mean
// WSR against the sweep value, one line per method and illumination.
void write_plot_script(const std::string& script_path, const std::string& csv_path, SweepKind sweep);

}  // namespace itsbf
