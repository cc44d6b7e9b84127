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

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "contentnet/fabric/topology.hpp"
#include "contentnet/net/types.hpp"

namespace contentnet::fabric {

class FabricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownNodeError : public FabricError {
 public:
  using FabricError::FabricError;
};
class UnknownRuleError : public FabricError {
 public:
  using FabricError::FabricError;
};
class InvalidRuleError : public FabricError {
 public:
  using FabricError::FabricError;
};

using RuleId = std::uint64_t;

struct TcpFlags {
  bool syn = false;
  bool ack = false;
  bool fin = false;
  bool rst = false;

  auto operator<=>(const TcpFlags&) const = default;
  std::string to_string() const;
};

struct Packet {
  net::FlowKey flow;
  std::string payload;
  TcpFlags flags;
  std::uint64_t seq = 0;
  std::string protocol = "tcp";
  // Set by the first rewrite-dst a packet undergoes; lets a NAT target
  // recover where the flow was originally headed.
  std::optional<net::Endpoint> original_dst;
};

// Absent fields are wildcards. A fully wildcard match is invalid.
struct FlowMatch {
  std::optional<std::string> src_ip;
  std::optional<std::string> dst_ip;
  std::optional<std::uint16_t> src_port;
  std::optional<std::uint16_t> dst_port;
  std::optional<std::string> protocol;

  bool wildcard() const {
    return !src_ip && !dst_ip && !src_port && !dst_port && !protocol;
  }
  bool matches(const Packet& p) const;
  std::string to_string() const;
};

struct Action {
  enum class Kind { forward, duplicate, rewrite_dst, drop };

  Kind kind;
  std::string next_hop;  // forward / duplicate
  net::Endpoint target;  // rewrite_dst

  static Action forward(std::string next) {
    return {Kind::forward, std::move(next), {}};
  }
  static Action duplicate(std::string next) {
    return {Kind::duplicate, std::move(next), {}};
  }
  static Action rewrite_dst(std::string ip, std::uint16_t port) {
    return {Kind::rewrite_dst, {}, {std::move(ip), port}};
  }
  static Action drop() { return {Kind::drop, {}, {}}; }

  std::string to_string() const;
};

struct FlowRule {
  FlowMatch match;
  std::vector<Action> actions;
  std::uint32_t priority = 0;
  RuleId id = 0;           // assigned by install_rule
  std::uint64_t seq = 0;   // installation order, assigned by install_rule
};

struct TraceStep {
  std::string node;
  std::string action;
};

struct Delivery {
  std::string host;
  Packet packet;
  double latency_ms = 0.0;  // link latency summed along this copy's branch
};

struct DeliveryTrace {
  std::vector<TraceStep> steps;
  double accumulated_latency_ms = 0.0;  // primary path only
  std::set<std::string> delivered_to;
  std::vector<Delivery> deliveries;

  std::string to_string() const;
};

inline constexpr std::size_t kDefaultMtuPayload = 1460;

// Rule-driven forwarding plane over a validated topology. Single
// logical owner; callers from multiple threads must serialize access.
class Network {
 public:
  explicit Network(Topology topology,
                   std::size_t mtu_payload = kDefaultMtuPayload);

  const Topology& topology() const { return topo_; }
  std::size_t mtu_payload() const { return mtu_payload_; }

  RuleId install_rule(const std::string& switch_id, FlowRule rule);
  void remove_rule(const std::string& switch_id, RuleId rule_id);

  // Highest priority wins; ties go to the earliest installed rule.
  const FlowRule* match_rule(const std::string& switch_id,
                             const Packet& packet) const;

  DeliveryTrace inject_packet(const std::string& from_host, Packet packet);

  // Minimal-latency path; ties broken by lexicographically smallest
  // node sequence. Both endpoints must exist.
  std::vector<std::string> shortest_path(const std::string& a,
                                         const std::string& b) const;
  double path_latency(const std::vector<std::string>& path) const;

  std::vector<FlowRule> rules(const std::string& switch_id) const;

 private:
  const FlowRule* best_match(const std::string& switch_id, const Packet& p,
                             const std::set<RuleId>& excluded) const;

  Topology topo_;
  std::size_t mtu_payload_;
  std::map<std::string, std::vector<FlowRule>> tables_;
  RuleId next_rule_id_ = 1;
  std::uint64_t next_seq_ = 1;
};

// Serializes fabric access for deployments where control-plane handlers
// and packet injection run on different threads.
class SharedNetwork {
 public:
  explicit SharedNetwork(Network net) : net_(std::move(net)) {}

  template <typename F>
  auto with(F&& f) {
    std::lock_guard lk(mu_);
    return f(net_);
  }
  template <typename F>
  auto with(F&& f) const {
    std::lock_guard lk(mu_);
    return f(net_);
  }

 private:
  mutable std::mutex mu_;
  Network net_;
};

}  // namespace contentnet::fabric
