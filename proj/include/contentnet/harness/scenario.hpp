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

#include "contentnet/fabric/topology.hpp"
#include "contentnet/harness/content.hpp"
#include "json.hpp"

namespace contentnet::harness {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScriptEntry {
  double at_ms = 0;
  std::string client;
  std::string file;
};

struct ScenarioConfig {
  std::map<std::string, std::string> addresses;  // host id -> ip
  std::string proxy_host = "proxy";
  std::string origin_host = "origin";
  std::vector<std::string> cache_hosts = {"cache"};
  std::uint16_t proxy_port = 3128;
  std::uint16_t origin_port = 80;
  std::uint16_t cache_port = 8080;
  std::uint64_t cache_capacity_bytes = 64ull << 20;
  double pending_ttl_ms = 30'000;
  double heartbeat_interval_ms = 5'000;
  int missed_heartbeats = 3;
  bool caching_enabled = true;
  bool controller_enabled = true;
  std::size_t mtu_payload = 1460;
  std::string index_name = "index.html";
};

struct Scenario {
  std::string name = "scenario";
  std::string topology_ref;   // path as written in the document
  std::string topology_json;  // raw document for echo/reload
  std::vector<ManifestEntry> manifest;
  std::vector<ScriptEntry> script;
  ScenarioConfig config;

  fabric::Topology topology() const;
};

// Parses and validates a scenario document. `base_dir` resolves the
// topology reference.
Scenario parse_scenario(const std::string& json_text,
                        const std::filesystem::path& base_dir);
Scenario load_scenario_file(const std::filesystem::path& path);

// Throws ScenarioError naming the first violated constraint.
void validate_scenario(const Scenario& s);

// The in-repo default: 3-switch line, 12 log-spaced files from 2 KB to
// 6 MB, each requested twice, origin side slower than cache side.
Scenario default_scenario();

nlohmann::ordered_json scenario_to_json(const Scenario& s);

}  // namespace contentnet::harness
