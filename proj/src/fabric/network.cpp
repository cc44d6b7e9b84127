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

#include "contentnet/fabric/network.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>

namespace contentnet::fabric {

std::string TcpFlags::to_string() const {
  std::string s;
  if (syn) s += "S";
  if (ack) s += "A";
  if (fin) s += "F";
  if (rst) s += "R";
  return s.empty() ? "-" : s;
}

bool FlowMatch::matches(const Packet& p) const {
  if (src_ip && *src_ip != p.flow.src_ip) return false;
  if (dst_ip && *dst_ip != p.flow.dst_ip) return false;
  if (src_port && *src_port != p.flow.src_port) return false;
  if (dst_port && *dst_port != p.flow.dst_port) return false;
  if (protocol && *protocol != p.protocol) return false;
  return true;
}

std::string FlowMatch::to_string() const {
  std::ostringstream os;
  os << "{";
  if (src_ip) os << "src_ip=" << *src_ip << " ";
  if (dst_ip) os << "dst_ip=" << *dst_ip << " ";
  if (src_port) os << "src_port=" << *src_port << " ";
  if (dst_port) os << "dst_port=" << *dst_port << " ";
  if (protocol) os << "proto=" << *protocol << " ";
  std::string s = os.str();
  if (s.back() == ' ') s.pop_back();
  return s + "}";
}

std::string Action::to_string() const {
  switch (kind) {
    case Kind::forward:
      return "forward(" + next_hop + ")";
    case Kind::duplicate:
      return "duplicate(" + next_hop + ")";
    case Kind::rewrite_dst:
      return "rewrite-dst(" + target.to_string() + ")";
    case Kind::drop:
      return "drop";
  }
  return "?";
}

std::string DeliveryTrace::to_string() const {
  std::ostringstream os;
  for (const auto& st : steps) os << st.node << ":" << st.action << ";";
  os << " latency=" << accumulated_latency_ms << " delivered=[";
  for (const auto& h : delivered_to) os << h << ",";
  os << "]";
  return os.str();
}

Network::Network(Topology topology, std::size_t mtu_payload)
    : topo_(std::move(topology)), mtu_payload_(mtu_payload) {
  for (const auto& s : topo_.switches()) tables_[s];
}

namespace {

void validate_rule(const FlowRule& rule) {
  if (rule.match.wildcard())
    throw InvalidRuleError("fully wildcard match is not allowed");
  if (rule.actions.empty())
    throw InvalidRuleError("rule action list must be non-empty");
  bool has_non_duplicate = false;
  for (const auto& a : rule.actions)
    if (a.kind != Action::Kind::duplicate) has_non_duplicate = true;
  if (!has_non_duplicate)
    throw InvalidRuleError(
        "duplicate cannot be the only action; a fork implies a primary "
        "forwarding action");
}

}  // namespace

RuleId Network::install_rule(const std::string& switch_id, FlowRule rule) {
  auto it = tables_.find(switch_id);
  if (it == tables_.end())
    throw UnknownNodeError("unknown switch: " + switch_id);
  validate_rule(rule);
  for (const auto& a : rule.actions) {
    if ((a.kind == Action::Kind::forward ||
         a.kind == Action::Kind::duplicate) &&
        !topo_.has_node(a.next_hop))
      throw InvalidRuleError("action references unknown node: " + a.next_hop);
  }
  rule.id = next_rule_id_++;
  rule.seq = next_seq_++;
  it->second.push_back(std::move(rule));
  return it->second.back().id;
}

void Network::remove_rule(const std::string& switch_id, RuleId rule_id) {
  auto it = tables_.find(switch_id);
  if (it == tables_.end())
    throw UnknownNodeError("unknown switch: " + switch_id);
  auto& rules = it->second;
  auto pos = std::find_if(rules.begin(), rules.end(),
                          [&](const FlowRule& r) { return r.id == rule_id; });
  if (pos == rules.end())
    throw UnknownRuleError("unknown rule " + std::to_string(rule_id) +
                           " on switch " + switch_id);
  rules.erase(pos);
}

const FlowRule* Network::best_match(const std::string& switch_id,
                                    const Packet& p,
                                    const std::set<RuleId>& excluded) const {
  auto it = tables_.find(switch_id);
  if (it == tables_.end())
    throw UnknownNodeError("unknown switch: " + switch_id);
  const FlowRule* best = nullptr;
  for (const auto& r : it->second) {
    if (excluded.count(r.id)) continue;
    if (!r.match.matches(p)) continue;
    if (!best || r.priority > best->priority ||
        (r.priority == best->priority && r.seq < best->seq))
      best = &r;
  }
  return best;
}

const FlowRule* Network::match_rule(const std::string& switch_id,
                                    const Packet& packet) const {
  return best_match(switch_id, packet, {});
}

DeliveryTrace Network::inject_packet(const std::string& from_host,
                                     Packet packet) {
  if (!topo_.is_host(from_host))
    throw UnknownNodeError("unknown host: " + from_host);
  if (packet.payload.size() > mtu_payload_)
    throw FabricError("payload exceeds MTU payload size (" +
                      std::to_string(packet.payload.size()) + " > " +
                      std::to_string(mtu_payload_) + ")");

  struct Walker {
    std::string at;  // current switch
    Packet pkt;
    double latency;
    bool primary;
    std::set<std::pair<std::string, RuleId>> applied;
    std::set<RuleId> fork_marks;
  };

  DeliveryTrace trace;
  trace.steps.push_back({from_host, "inject"});

  const std::string& ingress = topo_.host_switch(from_host);
  std::deque<Walker> walkers;
  walkers.push_back({ingress, std::move(packet),
                     topo_.link_latency(from_host, ingress), true, {}, {}});

  bool primary_done = false;
  auto finish_primary = [&](const Walker& w) {
    if (w.primary && !primary_done) {
      trace.accumulated_latency_ms = w.latency;
      primary_done = true;
    }
  };

  while (!walkers.empty()) {
    Walker w = std::move(walkers.front());
    walkers.pop_front();

    while (true) {
      const FlowRule* rule = best_match(w.at, w.pkt, w.fork_marks);
      if (!rule) {
        trace.steps.push_back({w.at, "drop(no-match)"});
        finish_primary(w);
        break;
      }
      auto pair = std::make_pair(w.at, rule->id);
      if (w.applied.count(pair)) {
        trace.steps.push_back({w.at, "drop(loop-guard)"});
        finish_primary(w);
        break;
      }
      w.applied.insert(pair);

      // Actions execute in order against the packet's current state;
      // forward/duplicate snapshot it, so the switch stays fixed for
      // the whole list.
      std::optional<Walker> continuation;
      bool dropped = false;
      bool forwarded = false;
      for (const auto& a : rule->actions) {
        if (a.kind == Action::Kind::rewrite_dst) {
          if (!w.pkt.original_dst)
            w.pkt.original_dst =
                net::Endpoint{w.pkt.flow.dst_ip, w.pkt.flow.dst_port};
          w.pkt.flow.dst_ip = a.target.ip;
          w.pkt.flow.dst_port = a.target.port;
          trace.steps.push_back({w.at, a.to_string()});
        } else if (a.kind == Action::Kind::drop) {
          trace.steps.push_back({w.at, "drop(rule)"});
          finish_primary(w);
          dropped = true;
          break;
        } else if (a.kind == Action::Kind::forward ||
                   a.kind == Action::Kind::duplicate) {
          bool is_dup = a.kind == Action::Kind::duplicate;
          bool copy_primary = w.primary && !is_dup && !forwarded;
          if (!is_dup) forwarded = true;

          double hop_latency = w.latency + topo_.link_latency(w.at, a.next_hop);
          trace.steps.push_back({w.at, a.to_string()});

          Walker next{a.next_hop, w.pkt,       hop_latency,
                      copy_primary, w.applied, w.fork_marks};
          if (is_dup) next.fork_marks.insert(rule->id);

          if (topo_.is_host(a.next_hop)) {
            trace.steps.push_back({a.next_hop, "deliver"});
            trace.delivered_to.insert(a.next_hop);
            trace.deliveries.push_back({a.next_hop, next.pkt, hop_latency});
            if (copy_primary) finish_primary(next);
          } else if (copy_primary) {
            continuation = std::move(next);
          } else {
            walkers.push_back(std::move(next));
          }
        }
      }
      if (dropped) break;
      if (continuation) {
        w = std::move(*continuation);
        continue;
      }
      if (w.primary && !forwarded) {
        // Matched rule carried no forwarding action for the primary copy.
        trace.steps.push_back({w.at, "end(no-forward)"});
        finish_primary(w);
      }
      break;
    }
  }
  return trace;
}

std::vector<std::string> Network::shortest_path(const std::string& a,
                                                const std::string& b) const {
  if (!topo_.has_node(a)) throw UnknownNodeError("unknown node: " + a);
  if (!topo_.has_node(b)) throw UnknownNodeError("unknown node: " + b);
  if (a == b) return {a};

  using Key = std::pair<double, std::vector<std::string>>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> pq;
  std::set<std::string> done;
  pq.push({0.0, {a}});
  while (!pq.empty()) {
    auto [dist, path] = pq.top();
    pq.pop();
    const std::string& n = path.back();
    if (done.count(n)) continue;
    done.insert(n);
    if (n == b) return path;
    for (const auto& [nbr, lat] : topo_.neighbors(n)) {
      if (done.count(nbr)) continue;
      auto next = path;
      next.push_back(nbr);
      pq.push({dist + lat, std::move(next)});
    }
  }
  // Load-time validation guarantees connectivity.
  throw FabricError("no path between " + a + " and " + b);
}

double Network::path_latency(const std::vector<std::string>& path) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    total += topo_.link_latency(path[i], path[i + 1]);
  return total;
}

std::vector<FlowRule> Network::rules(const std::string& switch_id) const {
  auto it = tables_.find(switch_id);
  if (it == tables_.end())
    throw UnknownNodeError("unknown switch: " + switch_id);
  return it->second;
}

}  // namespace contentnet::fabric
