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
#include "itsbf/results_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "itsbf/error.hpp"

namespace itsbf {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error(ErrorCode::kIo, "malformed number '" + s + "' in results file");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Error(ErrorCode::kIo, "malformed integer '" + s + "' in results file");
  return v;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

// Summary rows: trial = "mean", iterations = trials averaged, seed = trials
// that failed. Failed detail rows carry "failed" in the wsr column.
std::string format_results(const std::vector<ResultRecord>& records, const CsvOptions& options) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.sweep) << ',' << format_double(r.sweep_value) << ',';
    if (r.summary) out << "mean"; else out << r.trial;
    out << ',' << to_string(r.method) << ',' << (r.illumination ? to_string(*r.illumination) : "none") << ','
        << to_string(r.constraint) << ',';
    if (r.ok) out << format_double(r.wsr); else out << "failed";
    out << ',' << (r.summary ? r.n_averaged : r.iterations) << ',';
    if (options.include_timing) out << format_double(r.wall_time_ms);
    out << ',';
    if (r.summary) out << r.n_failed; else out << r.seed;
    out << '\n';
  }
  return out.str();
}

void write_results(const std::vector<ResultRecord>& records, const std::string& path, const CsvOptions& options) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  file << format_results(records, options);
  if (!file) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::vector<ResultRecord> parse_results(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw Error(ErrorCode::kIo, "missing results header");

  std::vector<ResultRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_row(line);
    if (f.size() != 10) throw Error(ErrorCode::kIo, "expected 10 columns, got " + std::to_string(f.size()));
    ResultRecord r;
    r.sweep = parse_sweep_kind(f[0]);
    r.sweep_value = parse_double(f[1]);
    r.summary = f[2] == "mean";
    r.trial = r.summary ? -1 : static_cast<int>(parse_int(f[2]));
    r.method = parse_method(f[3]);
    if (f[4] != "none") r.illumination = parse_illumination(f[4]);
    r.constraint = parse_constraint_kind(f[5]);
    r.ok = f[6] != "failed";
    r.wsr = r.ok ? parse_double(f[6]) : 0.0;
    const int count = static_cast<int>(parse_int(f[7]));
    r.wall_time_ms = f[8].empty() ? 0.0 : parse_double(f[8]);
    if (r.summary) {
      r.n_averaged = count;
      r.iterations = count;
      r.n_failed = static_cast<int>(parse_int(f[9]));
    } else {
      r.iterations = count;
      r.seed = std::stoull(f[9]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResultRecord> read_results(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_results(buf.str());
}

void write_plot_script(const std::string& script_path, const std::string& csv_path, SweepKind sweep) {
  const char* xlabel = sweep == SweepKind::kPowerBudget          ? "P_max [dBm]"
                       : sweep == SweepKind::kInterArrayDistance ? "inter-array distance [R_0]"
                                                                 : "surface loss [dB]";
  std::ofstream file(script_path, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + script_path + "' for writing");
  file << "#!/usr/bin/env python3\n"
          "\"\"\"Mean WSR against the swept parameter, generated by itsbf.\"\"\"\n"
          "import csv\n"
          "import sys\n"
          "from collections import defaultdict\n\n"
          "import matplotlib\n"
          "matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n\n"
          "CSV_PATH = sys.argv[1] if len(sys.argv) > 1 else \""
       << csv_path
       << "\"\n"
          "OUT_PATH = sys.argv[2] if len(sys.argv) > 2 else CSV_PATH.rsplit(\".\", 1)[0] + \".png\"\n\n"
          "series = defaultdict(list)\n"
          "constraint = \"\"\n"
          "with open(CSV_PATH, newline=\"\") as f:\n"
          "    for row in csv.DictReader(f):\n"
          "        if row[\"trial\"] != \"mean\" or row[\"wsr\"] == \"failed\":\n"
          "            continue\n"
          "        constraint = row[\"constraint\"].upper()\n"
          "        label = row[\"method\"] if row[\"illumination\"] == \"none\" else f\"{row['method']} ({row['illumination']})\"\n"
          "        series[label].append((float(row[\"sweep_value\"]), float(row[\"wsr\"])))\n\n"
          "fig, ax = plt.subplots(figsize=(5, 4))\n"
          "for label, points in sorted(series.items()):\n"
          "    points.sort()\n"
          "    ax.plot([p[0] for p in points], [p[1] for p in points], marker=\"o\", label=label)\n"
          "ax.set_xlabel(\""
       << xlabel
       << "\")\n"
          "ax.set_ylabel(\"mean WSR [bit/s/Hz]\")\n"
          "ax.set_title(f\"{constraint} constraint\")\n"
          "ax.grid(True, alpha=0.3)\n"
          "ax.legend(fontsize=7)\n"
          "fig.tight_layout()\n"
          "fig.savefig(OUT_PATH, dpi=150)\n"
          "print(OUT_PATH)\n";
}

}  // namespace itsbf
