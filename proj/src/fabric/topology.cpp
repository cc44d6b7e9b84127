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

#include "contentnet/fabric/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace contentnet::fabric {

namespace {

std::pair<std::string, std::string> ordered_pair(const std::string& a,
                                                 const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

Topology::Topology(std::vector<std::string> switches,
                   std::vector<std::pair<std::string, std::string>> hosts,
                   std::vector<Link> links) {
  for (const auto& s : switches) {
    if (s.empty()) throw TopologyError("switch id must be non-empty");
    if (!switches_.insert(s).second)
      throw TopologyError("duplicate switch id: " + s);
  }
  for (const auto& [id, sw] : hosts) {
    if (id.empty()) throw TopologyError("host id must be non-empty");
    if (switches_.count(id))
      throw TopologyError("node id used for both switch and host: " + id);
    if (!switches_.count(sw))
      throw TopologyError("host " + id + " attached to unknown switch: " + sw);
    if (!hosts_.emplace(id, sw).second)
      throw TopologyError("duplicate host id: " + id);
  }
  for (const auto& l : links) {
    if (!has_node(l.a))
      throw TopologyError("link endpoint references unknown node: " + l.a);
    if (!has_node(l.b))
      throw TopologyError("link endpoint references unknown node: " + l.b);
    if (l.a == l.b) throw TopologyError("self-loop link on node: " + l.a);
    if (l.latency_ms < 0)
      throw TopologyError("negative link latency on " + l.a + "-" + l.b);
    auto key = ordered_pair(l.a, l.b);
    if (!link_latency_.emplace(key, l.latency_ms).second)
      throw TopologyError("duplicate link between " + l.a + " and " + l.b);
    links_.push_back(l);
    adj_[l.a].emplace_back(l.b, l.latency_ms);
    adj_[l.b].emplace_back(l.a, l.latency_ms);
  }
  for (auto& [id, nbrs] : adj_) std::sort(nbrs.begin(), nbrs.end());

  // Hosts are single-homed: exactly one link, and it must reach the
  // attached switch.
  for (const auto& [id, sw] : hosts_) {
    auto it = adj_.find(id);
    if (it == adj_.end() || it->second.empty())
      throw TopologyError("host " + id + " has no link to its switch");
    if (it->second.size() != 1)
      throw TopologyError("host " + id + " must have exactly one link");
    if (it->second[0].first != sw)
      throw TopologyError("host " + id +
                          " link does not reach its attached switch " + sw);
  }

  // Connectivity over the full node set.
  if (!switches_.empty()) {
    std::set<std::string> seen;
    std::vector<std::string> stack{*switches_.begin()};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (!seen.insert(n).second) continue;
      auto it = adj_.find(n);
      if (it == adj_.end()) continue;
      for (const auto& [nbr, lat] : it->second) stack.push_back(nbr);
    }
    if (seen.size() != switches_.size() + hosts_.size())
      throw TopologyError("topology graph is not connected");
  } else if (!hosts_.empty()) {
    throw TopologyError("hosts present but no switches");
  }
}

const std::string& Topology::host_switch(const std::string& host_id) const {
  auto it = hosts_.find(host_id);
  if (it == hosts_.end()) throw TopologyError("unknown host: " + host_id);
  return it->second;
}

double Topology::link_latency(const std::string& a,
                              const std::string& b) const {
  auto it = link_latency_.find(ordered_pair(a, b));
  if (it == link_latency_.end())
    throw TopologyError("no link between " + a + " and " + b);
  return it->second;
}

const std::vector<std::pair<std::string, double>>& Topology::neighbors(
    const std::string& id) const {
  static const std::vector<std::pair<std::string, double>> kEmpty;
  auto it = adj_.find(id);
  return it == adj_.end() ? kEmpty : it->second;
}

Topology load_topology(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw TopologyError(std::string("topology parse error: ") + e.what());
  }
  try {
    std::vector<std::string> switches =
        doc.value("switches", std::vector<std::string>{});
    std::vector<std::pair<std::string, std::string>> hosts;
    for (const auto& h : doc.value("hosts", nlohmann::json::array()))
      hosts.emplace_back(h.at("id").get<std::string>(),
                         h.at("switch").get<std::string>());
    std::vector<Link> links;
    for (const auto& l : doc.value("links", nlohmann::json::array()))
      links.push_back(Link{l.at("a").get<std::string>(),
                           l.at("b").get<std::string>(),
                           l.at("latency_ms").get<double>()});
    return Topology(std::move(switches), std::move(hosts), std::move(links));
  } catch (const nlohmann::json::exception& e) {
    throw TopologyError(std::string("topology parse error: ") + e.what());
  }
}

Topology load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

}  // namespace contentnet::fabric
