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
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace contentnet::fabric {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Link {
  std::string a;
  std::string b;
  double latency_ms = 0.0;
};

// Validated graph of switches, single-homed hosts and weighted links.
// Construction enforces: unique node ids, hosts attached to existing
// switches via exactly one link, no self loops, at most one link per
// node pair, non-negative latencies, and a connected graph.
class Topology {
 public:
  Topology(std::vector<std::string> switches,
           std::vector<std::pair<std::string, std::string>> hosts,
           std::vector<Link> links);

  const std::set<std::string>& switches() const { return switches_; }
  const std::map<std::string, std::string>& hosts() const { return hosts_; }
  const std::vector<Link>& links() const { return links_; }

  bool is_switch(const std::string& id) const { return switches_.count(id); }
  bool is_host(const std::string& id) const { return hosts_.count(id); }
  bool has_node(const std::string& id) const {
    return is_switch(id) || is_host(id);
  }

  // Switch the host attaches to; throws on unknown host.
  const std::string& host_switch(const std::string& host_id) const;

  // Latency of the direct link between two nodes; throws if absent.
  double link_latency(const std::string& a, const std::string& b) const;

  // Adjacent (node, latency) pairs, sorted by node id.
  const std::vector<std::pair<std::string, double>>& neighbors(
      const std::string& id) const;

 private:
  std::set<std::string> switches_;
  std::map<std::string, std::string> hosts_;  // host -> switch
  std::vector<Link> links_;
  std::map<std::pair<std::string, std::string>, double> link_latency_;
  std::map<std::string, std::vector<std::pair<std::string, double>>> adj_;
};

// Parses the topology document format:
//   {"switches":[id...],
//    "hosts":[{"id":...,"switch":...}...],
//    "links":[{"a":...,"b":...,"latency_ms":N}...]}
Topology load_topology(const std::string& json_text);
Topology load_topology_file(const std::filesystem::path& path);

}  // namespace contentnet::fabric
