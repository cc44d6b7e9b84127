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

#include "contentnet/controller/core.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace contentnet::controller {

using fabric::Action;
using fabric::FlowMatch;
using fabric::FlowRule;

Core::Core(CoreConfig config, fabric::SharedNetwork& fabric,
           const Clock& clock, CacheNotifier& notifier)
    : cfg_(std::move(config)),
      fabric_(fabric),
      clock_(clock),
      notifier_(notifier),
      policy_([](const ContentMetadata&) { return true; }) {
  fabric_.with([&](const fabric::Network& net) {
    for (const auto& [host, ip] : cfg_.addresses) {
      if (!net.topology().is_host(host))
        throw InvalidArgumentError("addressed node is not a host: " + host);
      if (!host_by_ip_.emplace(ip, host).second)
        throw InvalidArgumentError("duplicate address: " + ip);
    }
    if (!cfg_.proxy_host.empty()) {
      if (!net.topology().is_host(cfg_.proxy_host))
        throw InvalidArgumentError("proxy host not in topology: " +
                                   cfg_.proxy_host);
      if (!cfg_.addresses.count(cfg_.proxy_host))
        throw InvalidArgumentError("proxy host has no address: " +
                                   cfg_.proxy_host);
    }
    return 0;
  });
}

void Core::set_policy(Policy policy) {
  std::lock_guard lk(mu_);
  policy_ = policy ? std::move(policy)
                   : [](const ContentMetadata&) { return true; };
}

std::optional<std::string> Core::host_by_ip(const std::string& ip) const {
  auto it = host_by_ip_.find(ip);
  if (it == host_by_ip_.end()) return std::nullopt;
  return it->second;
}

// -- session lifecycle ---------------------------------------------

std::string Core::register_storage(const StorageCapability& capability) {
  std::lock_guard lk(mu_);
  sweep_locked();
  if (capability.capacity_bytes == 0)
    throw InvalidArgumentError("storage capacity must be positive");
  if (capability.element_ip.empty() || capability.element_port == 0)
    throw InvalidArgumentError("storage element address is incomplete");
  auto host = host_by_ip(capability.element_ip);
  if (!host)
    throw InvalidArgumentError("unknown element address: " +
                               capability.element_ip);

  // A re-registration from the same element supersedes its session.
  for (auto& [id, s] : sessions_) {
    if (s.state == SessionState::active &&
        s.capability.element_ip == capability.element_ip &&
        s.capability.element_port == capability.element_port) {
      s.state = SessionState::closed;
      purge_session_entries_locked(id);
      spdlog::info("controller: session {} superseded by re-registration", id);
    }
  }

  std::string id = "sess-" + std::to_string(next_session_++);
  SessionInfo info;
  info.id = id;
  info.capability = capability;
  info.host = *host;
  info.last_heartbeat_ms = clock_.now_ms();
  sessions_.emplace(id, std::move(info));
  spdlog::info("controller: registered storage {} at {}:{} ({} bytes)", id,
               capability.element_ip, capability.element_port,
               capability.capacity_bytes);
  return id;
}

void Core::heartbeat(const std::string& session_id) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto it = sessions_.find(session_id);
  if (it == sessions_.end())
    throw NotFoundError("unknown session: " + session_id);
  if (it->second.state != SessionState::active)
    throw StateError("session " + session_id + " is " +
                     to_string(it->second.state));
  it->second.last_heartbeat_ms = clock_.now_ms();
}

void Core::report_stats(const std::string& session_id,
                        std::uint64_t used_bytes, std::uint64_t object_count) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto it = sessions_.find(session_id);
  if (it == sessions_.end())
    throw NotFoundError("unknown session: " + session_id);
  if (it->second.state != SessionState::active)
    throw StateError("session " + session_id + " is " +
                     to_string(it->second.state));
  if (used_bytes > it->second.capability.capacity_bytes)
    throw InvalidArgumentError("used bytes exceed advertised capacity");
  it->second.used_bytes = used_bytes;
  it->second.object_count = object_count;
}

void Core::deregister_storage(const std::string& session_id) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto it = sessions_.find(session_id);
  if (it == sessions_.end())
    throw NotFoundError("unknown session: " + session_id);
  if (it->second.state != SessionState::active)
    throw StateError("session " + session_id + " is " +
                     to_string(it->second.state));
  it->second.state = SessionState::closed;
  purge_session_entries_locked(session_id);
  spdlog::info("controller: session {} deregistered", session_id);
}

// -- content plane -------------------------------------------------

std::optional<net::Endpoint> Core::lookup_content(
    const std::string& file_name) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto it = cache_dict_.find(file_name);
  if (it == cache_dict_.end() || !it->second.authoritative)
    return std::nullopt;
  auto s = sessions_.find(it->second.session_id);
  if (s == sessions_.end() || s->second.state != SessionState::active)
    return std::nullopt;
  return it->second.cache;
}

std::optional<std::string> Core::cache_query(const std::string& source_ip) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto it = request_dict_.find(source_ip);
  if (it == request_dict_.end()) return std::nullopt;
  std::string name = it->second.file_name;
  request_dict_.erase(it);  // claim semantics: handed out at most once
  return name;
}

void Core::confirm_stored(const std::string& session_id,
                          const std::string& file_name) {
  std::lock_guard lk(mu_);
  sweep_locked();
  auto s = sessions_.find(session_id);
  if (s == sessions_.end())
    throw NotFoundError("unknown session: " + session_id);
  if (s->second.state != SessionState::active)
    throw StateError("session " + session_id + " is " +
                     to_string(s->second.state));
  auto it = cache_dict_.find(file_name);
  if (it == cache_dict_.end() || it->second.authoritative)
    throw NotFoundError("no provisional entry for: " + file_name);
  if (it->second.session_id != session_id)
    throw StateError("entry for " + file_name + " belongs to session " +
                     it->second.session_id);
  it->second.authoritative = true;
  remove_rules_locked(it->second);
  spdlog::info("controller: {} now served by {}", file_name,
               it->second.cache.to_string());
}

std::pair<std::string, double> Core::best_fork(
    const fabric::Network& net, const std::vector<std::string>& origin_path,
    const std::string& cache_node) {
  std::string best;
  double best_cost = 0;
  for (const auto& node : origin_path) {
    if (!net.topology().is_switch(node)) continue;
    double cost = net.path_latency(net.shortest_path(node, cache_node));
    if (best.empty() || cost < best_cost) {  // strict: earliest wins ties
      best = node;
      best_cost = cost;
    }
  }
  return {best, best_cost};
}

std::string Core::compute_fork_point(const std::string& origin_node,
                                     const std::string& proxy_node,
                                     const std::string& cache_node) const {
  return fabric_.with([&](const fabric::Network& net) {
    if (!net.topology().has_node(origin_node) ||
        !net.topology().has_node(proxy_node) ||
        !net.topology().has_node(cache_node))
      throw InvalidArgumentError("fork point query names an unknown node");
    auto path = net.shortest_path(origin_node, proxy_node);
    auto [sw, cost] = best_fork(net, path, cache_node);
    if (sw.empty())
      throw InvalidArgumentError("no switch on the origin-proxy path");
    return sw;
  });
}

void Core::report_metadata(const ContentMetadata& meta) {
  if (!meta.valid())
    throw InvalidArgumentError("invalid content metadata");

  struct Notification {
    net::Endpoint element;
    std::string name;
    net::FlowKey flow;
  };
  std::optional<Notification> notification;

  {
    std::lock_guard lk(mu_);
    sweep_locked();

    if (cache_dict_.count(meta.file_name)) return;  // cached or in flight
    if (request_dict_.count(meta.dst_ip)) return;   // first request wins
    if (!cfg_.caching_enabled || !policy_(meta)) return;

    // Candidate caches: live sessions that can store and serve and
    // still have room.
    std::vector<const SessionInfo*> eligible;
    for (const auto& [id, s] : sessions_) {
      if (s.state != SessionState::active) continue;
      if (!s.capability.ops.count(StorageOp::store) ||
          !s.capability.ops.count(StorageOp::serve))
        continue;
      if (s.used_bytes >= s.capability.capacity_bytes) continue;
      eligible.push_back(&s);
    }
    if (eligible.empty()) {
      spdlog::debug("controller: no eligible storage for {}", meta.file_name);
      return;
    }

    auto origin_host = host_by_ip(meta.dst_ip);
    if (!origin_host) {
      spdlog::debug("controller: origin {} not in topology, not caching",
                    meta.dst_ip);
      return;
    }
    const std::string& proxy_ip = cfg_.addresses.at(cfg_.proxy_host);

    struct Choice {
      const SessionInfo* session;
      std::string fork_switch;
      double cost;
      std::string cache_host;
    };
    std::optional<Choice> choice;
    std::vector<std::pair<std::string, fabric::RuleId>> installed;

    fabric_.with([&](fabric::Network& net) {
      auto path = net.shortest_path(*origin_host, cfg_.proxy_host);
      for (const SessionInfo* s : eligible) {
        auto cache_host = host_by_ip(s->capability.element_ip);
        if (!cache_host) continue;
        auto [sw, cost] = best_fork(net, path, *cache_host);
        if (sw.empty()) continue;
        auto key = std::make_tuple(cost, s->capability.element_ip, s->id);
        bool better = !choice || key < std::make_tuple(
                                           choice->cost,
                                           choice->session->capability.element_ip,
                                           choice->session->id);
        if (better) choice = Choice{s, sw, cost, *cache_host};
      }
      if (!choice) return 0;

      // Primary keeps flowing towards the proxy; the copy branches off
      // towards the cache host along its shortest path.
      auto fork_it = std::find(path.begin(), path.end(), choice->fork_switch);
      const std::string& primary_next = *(fork_it + 1);
      auto mirror = net.shortest_path(choice->fork_switch, choice->cache_host);

      FlowRule fork;
      fork.match = FlowMatch{.src_ip = meta.dst_ip,
                             .dst_ip = proxy_ip,
                             .src_port = meta.dst_port};
      fork.actions = {Action::forward(primary_next),
                      Action::duplicate(mirror.at(1))};
      fork.priority = cfg_.fork_rule_priority;
      installed.emplace_back(
          choice->fork_switch,
          net.install_rule(choice->fork_switch, std::move(fork)));

      // Carry the mirrored copy the rest of the way.
      for (std::size_t i = 1; i + 1 < mirror.size(); ++i) {
        FlowRule carry;
        carry.match = FlowMatch{.src_ip = meta.dst_ip,
                                .dst_ip = proxy_ip,
                                .src_port = meta.dst_port};
        carry.actions = {Action::forward(mirror[i + 1])};
        carry.priority = cfg_.fork_rule_priority;
        installed.emplace_back(mirror[i],
                               net.install_rule(mirror[i], std::move(carry)));
      }
      return 0;
    });
    if (!choice) return;

    double now = clock_.now_ms();
    request_dict_[meta.dst_ip] = Pending{meta.file_name, now};
    DictEntry entry;
    entry.cache = {choice->session->capability.element_ip,
                   choice->session->capability.element_port};
    entry.session_id = choice->session->id;
    entry.origin_ip = meta.dst_ip;
    entry.created_ms = now;
    entry.rules = std::move(installed);
    cache_dict_[meta.file_name] = std::move(entry);

    notification = Notification{
        {choice->session->capability.element_ip,
         choice->session->capability.element_port},
        meta.file_name,
        net::FlowKey{meta.dst_ip, meta.dst_port, proxy_ip, 0}};
    spdlog::info("controller: fork for {} at {} towards {}", meta.file_name,
                 choice->fork_switch, choice->cache_host);
  }

  // Outside the state lock: the notifier may do I/O.
  if (notification) {
    try {
      notifier_.notify_expect(notification->element, notification->name,
                              notification->flow);
    } catch (const std::exception& e) {
      spdlog::warn("controller: expect-content notify failed: {}", e.what());
    }
  }
}

// -- bootstrap rules ------------------------------------------------

void Core::install_default_routes() {
  std::lock_guard lk(mu_);
  fabric_.with([&](fabric::Network& net) {
    for (const auto& [host, ip] : cfg_.addresses) {
      for (const auto& sw : net.topology().switches()) {
        std::string next = net.topology().host_switch(host) == sw
                               ? host
                               : net.shortest_path(sw, host).at(1);
        FlowRule r;
        r.match = FlowMatch{.dst_ip = ip};
        r.actions = {Action::forward(next)};
        r.priority = cfg_.default_route_priority;
        net.install_rule(sw, std::move(r));
      }
    }
    return 0;
  });
}

void Core::install_nat_rules(const std::string& client_switch,
                             const std::string& proxy_host) {
  std::lock_guard lk(mu_);
  fabric_.with([&](fabric::Network& net) {
    const auto& topo = net.topology();
    if (!topo.is_switch(client_switch))
      throw InvalidArgumentError("unknown switch: " + client_switch);
    if (!topo.is_host(proxy_host))
      throw InvalidArgumentError("unknown proxy host: " + proxy_host);
    auto proxy_addr = cfg_.addresses.find(proxy_host);
    if (proxy_addr == cfg_.addresses.end())
      throw InvalidArgumentError("proxy host has no address: " + proxy_host);
    const std::string& proxy_ip = proxy_addr->second;

    std::string towards_proxy =
        topo.host_switch(proxy_host) == client_switch
            ? proxy_host
            : net.shortest_path(client_switch, proxy_host).at(1);

    for (const auto& [host, attached] : topo.hosts()) {
      if (attached != client_switch || host == proxy_host) continue;
      auto addr = cfg_.addresses.find(host);
      if (addr == cfg_.addresses.end()) continue;

      FlowRule steer;
      steer.match =
          FlowMatch{.src_ip = addr->second, .dst_port = cfg_.http_port};
      steer.actions = {Action::rewrite_dst(proxy_ip, cfg_.proxy_port),
                       Action::forward(towards_proxy)};
      steer.priority = cfg_.nat_rule_priority;
      net.install_rule(client_switch, std::move(steer));

      FlowRule back;
      back.match = FlowMatch{.src_ip = proxy_ip,
                             .dst_ip = addr->second,
                             .src_port = cfg_.proxy_port};
      back.actions = {Action::forward(host)};
      back.priority = cfg_.nat_rule_priority;
      net.install_rule(client_switch, std::move(back));
    }
    return 0;
  });
}

// -- housekeeping ---------------------------------------------------

void Core::sweep_locked() {
  double now = clock_.now_ms();
  double expiry = cfg_.heartbeat_interval_ms * cfg_.missed_heartbeats;

  for (auto& [id, s] : sessions_) {
    if (s.state == SessionState::active &&
        now - s.last_heartbeat_ms > expiry) {
      s.state = SessionState::expired;
      purge_session_entries_locked(id);
      spdlog::info("controller: session {} expired (no heartbeat)", id);
    }
  }

  for (auto it = request_dict_.begin(); it != request_dict_.end();) {
    if (now - it->second.inserted_ms > cfg_.pending_ttl_ms) {
      auto entry = cache_dict_.find(it->second.file_name);
      if (entry != cache_dict_.end() && !entry->second.authoritative) {
        remove_rules_locked(entry->second);
        cache_dict_.erase(entry);
      }
      it = request_dict_.erase(it);
    } else {
      ++it;
    }
  }

  // Claimed but never confirmed: reap the provisional entry and its
  // fork rules once the TTL passes.
  for (auto it = cache_dict_.begin(); it != cache_dict_.end();) {
    if (!it->second.authoritative &&
        now - it->second.created_ms > cfg_.pending_ttl_ms) {
      remove_rules_locked(it->second);
      it = cache_dict_.erase(it);
    } else {
      ++it;
    }
  }
}

void Core::purge_session_entries_locked(const std::string& session_id) {
  for (auto it = cache_dict_.begin(); it != cache_dict_.end();) {
    if (it->second.session_id == session_id) {
      remove_rules_locked(it->second);
      it = cache_dict_.erase(it);
    } else {
      ++it;
    }
  }
}

void Core::remove_rules_locked(DictEntry& entry) {
  if (entry.rules.empty()) return;
  fabric_.with([&](fabric::Network& net) {
    for (const auto& [sw, id] : entry.rules) {
      try {
        net.remove_rule(sw, id);
      } catch (const fabric::FabricError&) {
        // already gone
      }
    }
    return 0;
  });
  entry.rules.clear();
}

std::optional<SessionInfo> Core::session(const std::string& session_id) const {
  std::lock_guard lk(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

nlohmann::ordered_json Core::admin_state() {
  std::lock_guard lk(mu_);
  sweep_locked();
  nlohmann::ordered_json out;

  auto sessions = nlohmann::ordered_json::array();
  for (const auto& [id, s] : sessions_) {
    nlohmann::ordered_json ops = nlohmann::ordered_json::array();
    if (s.capability.ops.count(StorageOp::store)) ops.push_back("store");
    if (s.capability.ops.count(StorageOp::serve)) ops.push_back("serve");
    sessions.push_back({{"session_id", id},
                        {"ip", s.capability.element_ip},
                        {"port", s.capability.element_port},
                        {"capacity_bytes", s.capability.capacity_bytes},
                        {"ops", ops},
                        {"used_bytes", s.used_bytes},
                        {"object_count", s.object_count},
                        {"last_heartbeat_ms", s.last_heartbeat_ms},
                        {"state", to_string(s.state)}});
  }
  out["sessions"] = std::move(sessions);

  nlohmann::ordered_json cache_dict = nlohmann::ordered_json::object();
  for (const auto& [name, e] : cache_dict_) {
    cache_dict[name] = {{"ip", e.cache.ip},
                        {"port", e.cache.port},
                        {"session_id", e.session_id},
                        {"origin_ip", e.origin_ip},
                        {"authoritative", e.authoritative},
                        {"fork_rules", e.rules.size()}};
  }
  out["cache_dictionary"] = std::move(cache_dict);

  nlohmann::ordered_json pending = nlohmann::ordered_json::object();
  for (const auto& [ip, p] : request_dict_) {
    pending[ip] = {{"file_name", p.file_name},
                   {"age_ms", clock_.now_ms() - p.inserted_ms}};
  }
  out["request_dictionary"] = std::move(pending);

  out["config"] = {{"proxy_host", cfg_.proxy_host},
                   {"proxy_port", cfg_.proxy_port},
                   {"pending_ttl_ms", cfg_.pending_ttl_ms},
                   {"heartbeat_interval_ms", cfg_.heartbeat_interval_ms},
                   {"missed_heartbeats", cfg_.missed_heartbeats},
                   {"caching_enabled", cfg_.caching_enabled}};
  return out;
}

}  // namespace contentnet::controller
