/*
 * Copyright 2026 The Contentnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace contentnet::harness {

struct RequestRecord {
  int index = 0;
  std::string file_name;
  std::string client;
  double offset_ms = 0;        // scripted start
  double start_vt_ms = 0;      // virtual start (== offset)
  double end_vt_ms = 0;        // virtual completion
  double sim_latency_ms = 0;   // end - start, simulated links only
  double proc_wall_us = 0;     // measured host processing time
  std::string served_by;       // "origin" | "cache" | "none"
  std::uint64_t bytes = 0;
  std::string digest;
  bool ok = false;
  std::string error;
};

struct Report {
  std::string scenario_name;
  nlohmann::ordered_json config_echo;
  std::vector<RequestRecord> requests;

  // aggregates
  std::uint64_t total_requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t failures = 0;
  double hit_ratio = 0;
  double mean_hit_latency_ms = 0;
  double mean_miss_latency_ms = 0;
  std::map<std::string, std::uint64_t> origin_requests_per_file;
  bool success = false;
  std::string failure_reason;

  void finalize();  // recomputes the aggregate block from the records
};

nlohmann::ordered_json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& doc);
std::string report_to_csv(const Report& r);

// Writes report.json (always) and report.csv (optionally) under `dir`.
void emit_report(const Report& r, const std::filesystem::path& dir,
                 bool with_csv);

}  // namespace contentnet::harness
