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

#include "contentnet/proxy/proxy.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <thread>

#include "contentnet/util/url.hpp"

namespace contentnet::proxy {

namespace {

std::string simple_response(int status, const std::string& reason,
                            const std::string& body) {
  return "HTTP/1.1 " + std::to_string(status) + " " + reason +
         "\r\nContent-Length: " + std::to_string(body.size()) +
         "\r\nConnection: close\r\n\r\n" + body;
}

// Rewrites the request head for the upstream hop: keeps the request
// line and headers but forces Connection: close so one request maps to
// one upstream connection.
std::string upstream_head(const std::string& raw_head) {
  std::string out;
  out.reserve(raw_head.size() + 32);
  std::size_t pos = 0;
  bool first = true;
  while (pos < raw_head.size()) {
    std::size_t eol = raw_head.find("\r\n", pos);
    if (eol == std::string::npos) break;
    std::string_view line(raw_head.data() + pos, eol - pos);
    pos = eol + 2;
    if (line.empty()) break;  // end of head
    if (!first) {
      auto colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string name(line.substr(0, colon));
        for (auto& c : name) c = static_cast<char>(std::tolower(c));
        if (name == "connection" || name == "proxy-connection") continue;
      }
    }
    out.append(line);
    out.append("\r\n");
    first = false;
  }
  out.append("Connection: close\r\n\r\n");
  return out;
}

}  // namespace

ProxyDecision decide(const ParsedRequest& req, const net::Endpoint& client_src,
                     controller::Client& controller) {
  if (req.method != "GET") return ProxyDecision::no_proxy();

  net::Endpoint origin{req.original_dst_ip, req.original_dst_port};
  try {
    if (auto cached = controller.lookup_content(req.file_name))
      return ProxyDecision::redirect(*cached);
  } catch (const controller::ClientError& e) {
    // Fail open: content service is down, the web still works.
    spdlog::warn("proxy: controller unreachable, passing through: {}",
                 e.what());
    return ProxyDecision::passthrough(origin);
  }

  controller::ContentMetadata meta;
  meta.file_name = req.file_name;
  meta.dst_ip = origin.ip;
  meta.dst_port = origin.port;
  meta.src_ip = client_src.ip;
  meta.src_port = client_src.port;
  try {
    controller.report_metadata(meta);
  } catch (const controller::ClientError& e) {
    spdlog::warn("proxy: metadata report for {} failed: {}", req.file_name,
                 e.what());
  }
  return ProxyDecision::passthrough(origin);
}

TransferSummary relay(net::ByteStream& client, net::ByteStream& upstream) {
  auto start = std::chrono::steady_clock::now();
  TransferSummary summary;

  auto pump = [](net::ByteStream& from, net::ByteStream& to,
                 std::uint64_t& count) {
    char buf[16384];
    try {
      while (true) {
        std::size_t n = from.read_some(buf, sizeof(buf));
        if (n == 0) break;
        to.write_all(buf, n);
        count += n;
      }
      to.shutdown_write();
    } catch (const net::StreamError&) {
      // Mid-stream abort: drop both directions.
      from.close();
      to.close();
    }
  };

  std::thread up([&] { pump(client, upstream, summary.client_to_upstream); });
  pump(upstream, client, summary.upstream_to_client);
  up.join();

  summary.duration_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return summary;
}

ProxyService::ProxyService(controller::Client& controller, Options opts)
    : controller_(controller), opts_(opts) {}

void ProxyService::set_decision_hook(DecisionHook hook) {
  std::lock_guard lk(hook_mu_);
  hook_ = std::move(hook);
}

void ProxyService::handle_connection(net::StreamPtr client,
                                     net::Dialer& dialer) {
  ++connections_;
  try {
    std::string buf;
    char chunk[4096];
    ParsedRequest req;
    ParseStatus st = ParseStatus::incomplete;
    while (true) {
      st = parse_request_head(buf, client->original_dst(), opts_.index_name,
                              req);
      if (st != ParseStatus::incomplete) break;
      if (buf.size() >= opts_.max_head_bytes) {
        client->write_all(simple_response(431, "Request Header Fields Too Large",
                                          "request head too large\n"));
        client->close();
        ++failures_;
        return;
      }
      std::size_t n = client->read_some(chunk, sizeof(chunk));
      if (n == 0) {
        client->close();
        return;  // peer went away before sending a full head
      }
      buf.append(chunk, n);
    }
    if (st == ParseStatus::malformed) {
      client->write_all(simple_response(400, "Bad Request", "bad request\n"));
      client->close();
      ++failures_;
      return;
    }

    ProxyDecision decision = decide(req, client->peer_endpoint(), controller_);
    {
      std::lock_guard lk(hook_mu_);
      if (hook_) hook_(req, decision);
    }

    net::Endpoint upstream_addr;
    std::string head_to_send;
    switch (decision.kind) {
      case ProxyDecision::Kind::redirect:
        upstream_addr = decision.target;
        // Re-originate towards the cache under the canonical name.
        head_to_send = "GET /" + util::url_encode(req.file_name) +
                       " HTTP/1.1\r\nHost: " + upstream_addr.to_string() +
                       "\r\nConnection: close\r\n\r\n";
        ++redirects_;
        break;
      case ProxyDecision::Kind::passthrough:
        upstream_addr = decision.target;
        head_to_send = upstream_head(req.raw_head);
        ++passthroughs_;
        break;
      case ProxyDecision::Kind::no_proxy:
        // Not content traffic; tunnel it to where it was headed.
        upstream_addr = {req.original_dst_ip, req.original_dst_port};
        head_to_send = req.raw_head;
        break;
    }

    net::StreamPtr upstream;
    try {
      upstream = dialer.connect(upstream_addr);
    } catch (const net::ConnectError& e) {
      spdlog::warn("proxy: upstream {} refused: {}", upstream_addr.to_string(),
                   e.what());
      client->write_all(simple_response(502, "Bad Gateway", "bad gateway\n"));
      client->close();
      ++failures_;
      return;
    }

    upstream->write_all(head_to_send);
    // Forward whatever came in after the head (request body bytes).
    if (buf.size() > req.raw_head.size())
      upstream->write_all(buf.data() + req.raw_head.size(),
                          buf.size() - req.raw_head.size());

    relay(*client, *upstream);
    client->close();
    upstream->close();
  } catch (const std::exception& e) {
    // Per-connection isolation: one bad connection never takes the
    // service down.
    spdlog::warn("proxy: connection error: {}", e.what());
    ++failures_;
    try {
      client->close();
    } catch (...) {
    }
  }
}

}  // namespace contentnet::proxy
