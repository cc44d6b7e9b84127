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

#include "contentnet/harness/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace contentnet::harness {

using nlohmann::json;

fabric::Topology Scenario::topology() const {
  return fabric::load_topology(topology_json);
}

Scenario parse_scenario(const std::string& json_text,
                        const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }

  Scenario s;
  try {
    s.name = doc.value("name", "scenario");

    const auto& topo = doc.at("topology");
    if (topo.is_string()) {
      s.topology_ref = topo.get<std::string>();
      std::ifstream in(base_dir / s.topology_ref);
      if (!in)
        throw ScenarioError("cannot open topology document: " +
                            (base_dir / s.topology_ref).string());
      std::stringstream ss;
      ss << in.rdbuf();
      s.topology_json = ss.str();
    } else {
      s.topology_ref = "(inline)";
      s.topology_json = topo.dump();
    }

    for (const auto& m : doc.value("manifest", json::array()))
      s.manifest.push_back({m.at("name").get<std::string>(),
                            m.at("size").get<std::uint64_t>(),
                            m.value("seed", std::uint64_t{0})});

    for (const auto& r : doc.value("script", json::array()))
      s.script.push_back({r.value("at_ms", 0.0),
                          r.at("client").get<std::string>(),
                          r.at("file").get<std::string>()});

    const auto cfg = doc.value("config", json::object());
    auto& c = s.config;
    for (const auto& [host, ip] :
         cfg.value("addresses", std::map<std::string, std::string>{}))
      c.addresses[host] = ip;
    c.proxy_host = cfg.value("proxy_host", c.proxy_host);
    c.origin_host = cfg.value("origin_host", c.origin_host);
    c.cache_hosts = cfg.value("cache_hosts", c.cache_hosts);
    c.proxy_port = cfg.value("proxy_port", c.proxy_port);
    c.origin_port = cfg.value("origin_port", c.origin_port);
    c.cache_port = cfg.value("cache_port", c.cache_port);
    c.cache_capacity_bytes =
        cfg.value("cache_capacity_bytes", c.cache_capacity_bytes);
    c.pending_ttl_ms = cfg.value("pending_ttl_ms", c.pending_ttl_ms);
    c.heartbeat_interval_ms =
        cfg.value("heartbeat_interval_ms", c.heartbeat_interval_ms);
    c.missed_heartbeats = cfg.value("missed_heartbeats", c.missed_heartbeats);
    c.caching_enabled = cfg.value("caching_enabled", c.caching_enabled);
    c.controller_enabled =
        cfg.value("controller_enabled", c.controller_enabled);
    c.mtu_payload = cfg.value("mtu_payload", c.mtu_payload);
    c.index_name = cfg.value("index_name", c.index_name);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

void validate_scenario(const Scenario& s) {
  fabric::Topology topo = [&] {
    try {
      return s.topology();
    } catch (const fabric::TopologyError& e) {
      throw ScenarioError(std::string("topology invalid: ") + e.what());
    }
  }();

  const auto& c = s.config;
  auto require_addressed_host = [&](const std::string& host,
                                    const char* role) {
    if (!topo.is_host(host))
      throw ScenarioError(std::string(role) + " host not in topology: " + host);
    if (!c.addresses.count(host))
      throw ScenarioError(std::string(role) + " host has no address: " + host);
  };
  require_addressed_host(c.proxy_host, "proxy");
  require_addressed_host(c.origin_host, "origin");
  if (c.cache_hosts.empty()) throw ScenarioError("no cache hosts configured");
  for (const auto& h : c.cache_hosts) require_addressed_host(h, "cache");
  for (const auto& [host, ip] : c.addresses)
    if (!topo.is_host(host))
      throw ScenarioError("addressed node is not a host: " + host);

  std::set<std::string> ips;
  for (const auto& [host, ip] : c.addresses)
    if (!ips.insert(ip).second) throw ScenarioError("duplicate address: " + ip);

  if (s.manifest.empty()) throw ScenarioError("manifest is empty");
  std::set<std::string> names;
  for (const auto& m : s.manifest) {
    if (m.name.empty()) throw ScenarioError("manifest entry with empty name");
    if (m.size_bytes == 0)
      throw ScenarioError("manifest entry " + m.name + " has size 0");
    if (!names.insert(m.name).second)
      throw ScenarioError("duplicate manifest entry: " + m.name);
  }

  for (const auto& r : s.script) {
    if (!names.count(r.file))
      throw ScenarioError("scripted file not in manifest: " + r.file);
    require_addressed_host(r.client, "client");
    if (r.client == c.proxy_host || r.client == c.origin_host)
      throw ScenarioError("client role overlaps proxy/origin: " + r.client);
    if (r.at_ms < 0) throw ScenarioError("negative script time offset");
  }
}

Scenario default_scenario() {
  Scenario s;
  s.name = "default-two-pass";
  s.topology_ref = "(built-in)";

  // Line of three switches; the origin sits behind the slow side, the
  // cache close to the client edge.
  nlohmann::ordered_json topo = {
      {"switches", {"s1", "s2", "s3"}},
      {"hosts",
       {{{"id", "client"}, {"switch", "s1"}},
        {{"id", "proxy"}, {"switch", "s1"}},
        {{"id", "cache"}, {"switch", "s2"}},
        {{"id", "origin"}, {"switch", "s3"}}}},
      {"links",
       {{{"a", "client"}, {"b", "s1"}, {"latency_ms", 1.0}},
        {{"a", "proxy"}, {"b", "s1"}, {"latency_ms", 1.0}},
        {{"a", "cache"}, {"b", "s2"}, {"latency_ms", 2.0}},
        {{"a", "origin"}, {"b", "s3"}, {"latency_ms", 40.0}},
        {{"a", "s1"}, {"b", "s2"}, {"latency_ms", 5.0}},
        {{"a", "s2"}, {"b", "s3"}, {"latency_ms", 30.0}}}}};
  s.topology_json = topo.dump();

  s.manifest = default_manifest();

  double t = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& m : s.manifest) {
      s.script.push_back({t, "client", m.name});
      t += 500.0;
    }
  }

  s.config.addresses = {{"client", "10.0.0.1"},
                        {"proxy", "10.0.0.2"},
                        {"cache", "10.0.0.3"},
                        {"origin", "10.0.0.4"}};
  return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["name"] = s.name;
  doc["topology"] = nlohmann::ordered_json::parse(s.topology_json);

  auto manifest = nlohmann::ordered_json::array();
  for (const auto& m : s.manifest)
    manifest.push_back(
        {{"name", m.name}, {"size", m.size_bytes}, {"seed", m.seed}});
  doc["manifest"] = std::move(manifest);

  auto script = nlohmann::ordered_json::array();
  for (const auto& r : s.script)
    script.push_back(
        {{"at_ms", r.at_ms}, {"client", r.client}, {"file", r.file}});
  doc["script"] = std::move(script);

  const auto& c = s.config;
  doc["config"] = {{"addresses", c.addresses},
                   {"proxy_host", c.proxy_host},
                   {"origin_host", c.origin_host},
                   {"cache_hosts", c.cache_hosts},
                   {"proxy_port", c.proxy_port},
                   {"origin_port", c.origin_port},
                   {"cache_port", c.cache_port},
                   {"cache_capacity_bytes", c.cache_capacity_bytes},
                   {"pending_ttl_ms", c.pending_ttl_ms},
                   {"heartbeat_interval_ms", c.heartbeat_interval_ms},
                   {"missed_heartbeats", c.missed_heartbeats},
                   {"caching_enabled", c.caching_enabled},
                   {"controller_enabled", c.controller_enabled},
                   {"mtu_payload", c.mtu_payload},
                   {"index_name", c.index_name}};
  return doc;
}

}  // namespace contentnet::harness
