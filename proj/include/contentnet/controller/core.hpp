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

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "contentnet/controller/clock.hpp"
#include "contentnet/controller/notifier.hpp"
#include "contentnet/controller/types.hpp"
#include "contentnet/fabric/network.hpp"
#include "json.hpp"

namespace contentnet::controller {

class ControllerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Bad input (maps to HTTP 400).
class InvalidArgumentError : public ControllerError {
 public:
  using ControllerError::ControllerError;
};
// Unknown entity (maps to HTTP 404).
class NotFoundError : public ControllerError {
 public:
  using ControllerError::ControllerError;
};
// Operation not valid in the entity's current state (maps to HTTP 409).
class StateError : public ControllerError {
 public:
  using ControllerError::ControllerError;
};

struct CoreConfig {
  std::map<std::string, std::string> addresses;  // host id -> ip
  std::string proxy_host;
  std::uint16_t proxy_port = 3128;
  std::uint16_t http_port = 80;  // traffic steered to the proxy
  double pending_ttl_ms = 30'000;
  double heartbeat_interval_ms = 5'000;
  int missed_heartbeats = 3;
  bool caching_enabled = true;
  std::uint32_t default_route_priority = 0;
  std::uint32_t fork_rule_priority = 100;
  std::uint32_t nat_rule_priority = 200;
};

struct SessionInfo {
  std::string id;
  StorageCapability capability;
  std::string host;  // topology node backing the element
  double last_heartbeat_ms = 0;
  std::uint64_t used_bytes = 0;
  std::uint64_t object_count = 0;
  SessionState state = SessionState::active;
};

// Control plane state: storage sessions, cacheDictionary (file name ->
// cache address), requestDictionary (origin ip -> pending file name),
// fork-point computation and flow-rule pushes into the fabric. All
// state effects are serialized and totally ordered.
class Core {
 public:
  Core(CoreConfig config, fabric::SharedNetwork& fabric, const Clock& clock,
       CacheNotifier& notifier);

  // -- Storage primitives ------------------------------------------
  std::string register_storage(const StorageCapability& capability);
  void heartbeat(const std::string& session_id);
  void report_stats(const std::string& session_id, std::uint64_t used_bytes,
                    std::uint64_t object_count);
  void deregister_storage(const std::string& session_id);

  // -- Content primitives ------------------------------------------
  std::optional<net::Endpoint> lookup_content(const std::string& file_name);
  void report_metadata(const ContentMetadata& meta);
  // Claims (returns and removes) the pending entry for an origin ip.
  std::optional<std::string> cache_query(const std::string& source_ip);
  void confirm_stored(const std::string& session_id,
                      const std::string& file_name);

  // Switch on the origin->proxy shortest path minimizing the detour to
  // the cache; ties go to the switch earliest on the path.
  std::string compute_fork_point(const std::string& origin_node,
                                 const std::string& proxy_node,
                                 const std::string& cache_node) const;

  // -- Bootstrap rules ---------------------------------------------
  // Steers a switch's client port-80 traffic through the proxy and the
  // proxy's replies back; one rule pair per non-proxy host.
  void install_nat_rules(const std::string& client_switch,
                         const std::string& proxy_host);
  // Plain destination routing for every addressed host.
  void install_default_routes();

  // Caching policy predicate; defaults to cache-everything.
  using Policy = std::function<bool(const ContentMetadata&)>;
  void set_policy(Policy policy);

  nlohmann::ordered_json admin_state();

  std::optional<SessionInfo> session(const std::string& session_id) const;
  const CoreConfig& config() const { return cfg_; }

 private:
  struct DictEntry {
    net::Endpoint cache;
    std::string session_id;
    std::string origin_ip;
    bool authoritative = false;
    double created_ms = 0;
    std::vector<std::pair<std::string, fabric::RuleId>> rules;
  };
  struct Pending {
    std::string file_name;
    double inserted_ms = 0;
  };

  void sweep_locked();
  void purge_session_entries_locked(const std::string& session_id);
  void remove_rules_locked(DictEntry& entry);
  std::optional<std::string> host_by_ip(const std::string& ip) const;

  // (fork switch, detour latency) for one candidate cache node.
  static std::pair<std::string, double> best_fork(
      const fabric::Network& net, const std::vector<std::string>& origin_path,
      const std::string& cache_node);

  CoreConfig cfg_;
  fabric::SharedNetwork& fabric_;
  const Clock& clock_;
  CacheNotifier& notifier_;
  Policy policy_;

  mutable std::mutex mu_;
  std::map<std::string, SessionInfo> sessions_;
  std::map<std::string, DictEntry> cache_dict_;
  std::map<std::string, Pending> request_dict_;
  std::map<std::string, std::string> host_by_ip_;
  std::uint64_t next_session_ = 1;
};

}  // namespace contentnet::controller
