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

#include "contentnet/cache/service.hpp"

#include <spdlog/spdlog.h>

#include "contentnet/cache/http_response.hpp"
#include "contentnet/util/url.hpp"
#include "json.hpp"

namespace contentnet::cache {

namespace {

constexpr std::size_t kMaxRequestHead = 16 * 1024;

std::string http_text_response(int status, const std::string& reason,
                               const std::string& body) {
  std::string out = "HTTP/1.1 " + std::to_string(status) + " " + reason +
                    "\r\nContent-Length: " + std::to_string(body.size()) +
                    "\r\nConnection: close\r\n\r\n";
  return out + body;
}

}  // namespace

CacheService::CacheService(ContentStore& store, controller::Client& controller)
    : CacheService(store, controller, Options{}) {}

CacheService::CacheService(ContentStore& store, controller::Client& controller,
                           Options opts)
    : store_(store),
      controller_(controller),
      opts_(opts),
      reassembler_(opts.reassembly) {}

void CacheService::set_session_id(std::string id) {
  std::lock_guard lk(mu_);
  session_id_ = std::move(id);
}

std::string CacheService::session_id() const {
  std::lock_guard lk(mu_);
  return session_id_;
}

std::optional<std::string> CacheService::ingest(const TcpSegment& seg) {
  net::FlowKey flow = seg.flow;
  std::string stream;
  {
    std::lock_guard lk(mu_);
    auto st = reassembler_.observe_segment(seg);
    if (st == Reassembler::Observe::abandoned) {
      spdlog::warn("cache: flow {} exceeded buffer cap, dropped",
                   flow.to_string());
      return std::nullopt;
    }
    if (st != Reassembler::Observe::complete) return std::nullopt;
    try {
      stream = reassembler_.reassemble(flow);
    } catch (const ReassemblyError& e) {
      spdlog::warn("cache: {}", e.what());
      ++discards_;
      return std::nullopt;
    }
  }

  ExtractResult res = extract_body(stream);
  if (!res.ok()) {
    spdlog::debug("cache: flow {} not cacheable (extract status {})",
                  flow.to_string(), static_cast<int>(res.status));
    ++discards_;
    return std::nullopt;
  }
  return resolve_and_store(flow, res.http_status, res.body);
}

std::optional<std::string> CacheService::resolve_and_store(
    const net::FlowKey& flow, int status, const std::string& body) {
  if (status != 200) {
    ++discards_;
    return std::nullopt;
  }

  std::optional<std::string> name;
  try {
    name = controller_.claim_pending(flow.src_ip);
  } catch (const controller::ClientError& e) {
    spdlog::warn("cache: controller unreachable while resolving {}: {}",
                 flow.src_ip, e.what());
    ++discards_;
    return std::nullopt;
  }
  if (!name) {
    // Nothing pending for this origin: not ours to keep.
    ++discards_;
    return std::nullopt;
  }

  if (!store_.put(*name, body, flow.src_ip)) {
    spdlog::warn("cache: failed to persist {} ({} bytes)", *name, body.size());
    return std::nullopt;
  }
  ++stores_;

  std::string sid = session_id();
  if (!sid.empty()) {
    try {
      controller_.confirm_stored(sid, *name);
      if (opts_.report_stats_after_store)
        controller_.report_stats(sid, store_.used_bytes(),
                                 store_.object_count());
    } catch (const controller::ClientError& e) {
      spdlog::warn("cache: confirm for {} failed: {}", *name, e.what());
    }
  }
  return name;
}

std::string CacheService::serve(const std::string& file_name) {
  auto entry = store_.get(file_name);
  if (!entry) return http_text_response(404, "Not Found", "not cached\n");
  ++serves_;
  std::string head =
      "HTTP/1.1 200 OK\r\nContent-Length: " +
      std::to_string(entry->content_length) +
      "\r\nContent-Type: application/octet-stream\r\nConnection: close\r\n\r\n";
  return head + entry->body;
}

void CacheService::handle_stream(net::ByteStream& stream) {
  std::string buf;
  char chunk[4096];
  std::size_t head_end = std::string::npos;
  while (buf.size() < kMaxRequestHead) {
    head_end = buf.find("\r\n\r\n");
    if (head_end != std::string::npos) break;
    std::size_t n = stream.read_some(chunk, sizeof(chunk));
    if (n == 0) break;
    buf.append(chunk, n);
  }
  if (head_end == std::string::npos) {
    stream.write_all(http_text_response(400, "Bad Request", ""));
    stream.close();
    return;
  }

  std::string request_line = buf.substr(0, buf.find("\r\n"));
  std::size_t sp1 = request_line.find(' ');
  std::size_t sp2 =
      sp1 == std::string::npos ? std::string::npos
                               : request_line.find(' ', sp1 + 1);
  if (sp1 == std::string::npos || sp2 == std::string::npos) {
    stream.write_all(http_text_response(400, "Bad Request", ""));
    stream.close();
    return;
  }
  std::string method = request_line.substr(0, sp1);
  std::string target = request_line.substr(sp1 + 1, sp2 - sp1 - 1);

  if (method == "POST" && target == "/expect-content") {
    // Body length from the head; read the remainder if needed.
    std::size_t content_length = 0;
    std::string head = buf.substr(0, head_end);
    auto pos = head.find("Content-Length:");
    if (pos != std::string::npos)
      content_length = std::strtoull(head.c_str() + pos + 15, nullptr, 10);
    std::string body = buf.substr(head_end + 4);
    while (body.size() < content_length) {
      std::size_t n = stream.read_some(chunk, sizeof(chunk));
      if (n == 0) break;
      body.append(chunk, n);
    }
    try {
      auto doc = nlohmann::json::parse(body);
      net::FlowKey flow{doc.at("flow").at("src_ip").get<std::string>(),
                        doc.at("flow").at("src_port").get<std::uint16_t>(),
                        doc.at("flow").at("dst_ip").get<std::string>(),
                        doc.at("flow").value("dst_port", std::uint16_t{0})};
      handle_expect(doc.at("file_name").get<std::string>(), flow);
      stream.write_all("HTTP/1.1 204 No Content\r\nConnection: close\r\n\r\n");
    } catch (const nlohmann::json::exception&) {
      stream.write_all(http_text_response(400, "Bad Request", ""));
    }
    stream.close();
    return;
  }

  if (method != "GET") {
    stream.write_all(http_text_response(405, "Method Not Allowed", ""));
    stream.close();
    return;
  }

  std::string name = target;
  if (!name.empty() && name.front() == '/') name.erase(0, 1);
  name = util::url_decode(name);
  stream.write_all(serve(name));
  stream.close();
}

void CacheService::handle_expect(const std::string& file_name,
                                 const net::FlowKey& flow) {
  std::lock_guard lk(mu_);
  expectations_[{flow.src_ip, flow.src_port, flow.dst_ip}] = file_name;
}

std::optional<std::string> CacheService::expected_name(
    const net::FlowKey& flow) const {
  std::lock_guard lk(mu_);
  auto it = expectations_.find({flow.src_ip, flow.src_port, flow.dst_ip});
  if (it == expectations_.end()) return std::nullopt;
  return it->second;
}

void CacheService::purge_stale_flows() {
  std::lock_guard lk(mu_);
  for (const auto& flow : reassembler_.purge_stale())
    spdlog::debug("cache: purged stale incomplete flow {}", flow.to_string());
}

}  // namespace contentnet::cache
