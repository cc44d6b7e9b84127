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

#include <atomic>
#include <functional>
#include <mutex>

#include "contentnet/controller/client.hpp"
#include "contentnet/net/stream.hpp"
#include "contentnet/proxy/http_request.hpp"

namespace contentnet::proxy {

struct ProxyDecision {
  enum class Kind { redirect, passthrough, no_proxy };

  Kind kind = Kind::no_proxy;
  net::Endpoint target;  // redirect: cache address; passthrough: origin

  static ProxyDecision redirect(net::Endpoint cache) {
    return {Kind::redirect, std::move(cache)};
  }
  static ProxyDecision passthrough(net::Endpoint origin) {
    return {Kind::passthrough, std::move(origin)};
  }
  static ProxyDecision no_proxy() { return {Kind::no_proxy, {}}; }
};

// Content decision for one parsed request: cached somewhere -> redirect
// there; unknown -> report the five-tuple and pass through to the
// origin; non-GET -> hands off. An unreachable controller fails open to
// passthrough without metadata.
ProxyDecision decide(const ParsedRequest& req, const net::Endpoint& client_src,
                     controller::Client& controller);

struct TransferSummary {
  std::uint64_t client_to_upstream = 0;
  std::uint64_t upstream_to_client = 0;
  double duration_ms = 0;
};

// Shuttles bytes both ways until both sides reach EOF; a half-close on
// one side propagates to the other.
TransferSummary relay(net::ByteStream& client, net::ByteStream& upstream);

// Connection handler shared by the standalone daemon and the simulated
// deployment; the transport and upstream dialer are injected.
class ProxyService {
 public:
  struct Options {
    std::string index_name = "index.html";
    std::size_t max_head_bytes = 16 * 1024;
  };

  ProxyService(controller::Client& controller, Options opts = {});

  void handle_connection(net::StreamPtr client, net::Dialer& dialer);

  // Observability hook, invoked once per decided request.
  using DecisionHook =
      std::function<void(const ParsedRequest&, const ProxyDecision&)>;
  void set_decision_hook(DecisionHook hook);

  std::uint64_t connections() const { return connections_; }
  std::uint64_t redirects() const { return redirects_; }
  std::uint64_t passthroughs() const { return passthroughs_; }
  std::uint64_t failures() const { return failures_; }

 private:
  controller::Client& controller_;
  Options opts_;
  std::mutex hook_mu_;
  DecisionHook hook_;

  std::atomic<std::uint64_t> connections_{0};
  std::atomic<std::uint64_t> redirects_{0};
  std::atomic<std::uint64_t> passthroughs_{0};
  std::atomic<std::uint64_t> failures_{0};
};

}  // namespace contentnet::proxy
