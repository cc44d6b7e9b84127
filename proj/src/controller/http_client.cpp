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

#include "contentnet/controller/client.hpp"
#include "contentnet/controller/notifier.hpp"
#include "contentnet/util/url.hpp"

#include "httplib.h"
#include "json.hpp"

namespace contentnet::controller {

using nlohmann::json;

struct HttpClient::Impl {
  std::string base_url;
  int timeout_ms;

  explicit Impl(std::string url, int timeout)
      : base_url(std::move(url)), timeout_ms(timeout) {}

  // One short-lived client per call keeps this safe for concurrent use.
  httplib::Client make() {
    httplib::Client cli(base_url);
    cli.set_connection_timeout(0, timeout_ms * 1000);
    cli.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    return cli;
  }

  [[noreturn]] static void unreachable(const httplib::Result& res,
                                       const std::string& what) {
    throw ClientError("controller unreachable during " + what + ": " +
                      httplib::to_string(res.error()));
  }

  [[noreturn]] static void unexpected(const httplib::Result& res,
                                      const std::string& what) {
    std::string detail = res->body;
    try {
      detail = json::parse(res->body).value("error", detail);
    } catch (const json::exception&) {
    }
    throw ClientError(what + " failed with status " +
                      std::to_string(res->status) + ": " + detail);
  }
};

HttpClient::HttpClient(std::string base_url, int timeout_ms)
    : impl_(std::make_unique<Impl>(std::move(base_url), timeout_ms)) {}

HttpClient::~HttpClient() = default;

std::optional<net::Endpoint> HttpClient::lookup_content(
    const std::string& file_name) {
  auto cli = impl_->make();
  auto res = cli.Get("/content?name=" + util::url_encode(file_name));
  if (!res) Impl::unreachable(res, "content lookup");
  if (res->status == 404) return std::nullopt;
  if (res->status != 200) Impl::unexpected(res, "content lookup");
  auto doc = json::parse(res->body);
  return net::Endpoint{doc.at("ip").get<std::string>(),
                       doc.at("port").get<std::uint16_t>()};
}

void HttpClient::report_metadata(const ContentMetadata& meta) {
  json body{{"file_name", meta.file_name},
            {"dst_ip", meta.dst_ip},
            {"dst_port", meta.dst_port},
            {"src_ip", meta.src_ip},
            {"src_port", meta.src_port}};
  auto cli = impl_->make();
  auto res = cli.Post("/metadata", body.dump(), "application/json");
  if (!res) Impl::unreachable(res, "metadata report");
  if (res->status != 204) Impl::unexpected(res, "metadata report");
}

std::optional<std::string> HttpClient::claim_pending(
    const std::string& source_ip) {
  auto cli = impl_->make();
  auto res = cli.Get("/pending?source_ip=" + util::url_encode(source_ip));
  if (!res) Impl::unreachable(res, "pending claim");
  if (res->status == 404) return std::nullopt;
  if (res->status != 200) Impl::unexpected(res, "pending claim");
  return json::parse(res->body).at("file_name").get<std::string>();
}

std::string HttpClient::register_storage(const StorageCapability& cap) {
  json ops = json::array();
  if (cap.ops.count(StorageOp::store)) ops.push_back("store");
  if (cap.ops.count(StorageOp::serve)) ops.push_back("serve");
  json body{{"ip", cap.element_ip},
            {"port", cap.element_port},
            {"capacity_bytes", cap.capacity_bytes},
            {"ops", ops}};
  auto cli = impl_->make();
  auto res = cli.Post("/storage/register", body.dump(), "application/json");
  if (!res) Impl::unreachable(res, "storage registration");
  if (res->status != 200) Impl::unexpected(res, "storage registration");
  return json::parse(res->body).at("session_id").get<std::string>();
}

void HttpClient::heartbeat(const std::string& session_id) {
  json body{{"session_id", session_id}};
  auto cli = impl_->make();
  auto res = cli.Post("/storage/heartbeat", body.dump(), "application/json");
  if (!res) Impl::unreachable(res, "heartbeat");
  if (res->status != 204) Impl::unexpected(res, "heartbeat");
}

void HttpClient::report_stats(const std::string& session_id,
                              std::uint64_t used_bytes,
                              std::uint64_t object_count) {
  json body{{"session_id", session_id},
            {"used_bytes", used_bytes},
            {"object_count", object_count}};
  auto cli = impl_->make();
  auto res = cli.Post("/storage/stats", body.dump(), "application/json");
  if (!res) Impl::unreachable(res, "stats report");
  if (res->status != 204) Impl::unexpected(res, "stats report");
}

void HttpClient::confirm_stored(const std::string& session_id,
                                const std::string& file_name) {
  json body{{"session_id", session_id}, {"file_name", file_name}};
  auto cli = impl_->make();
  auto res = cli.Post("/storage/confirm", body.dump(), "application/json");
  if (!res) Impl::unreachable(res, "store confirmation");
  if (res->status != 204) Impl::unexpected(res, "store confirmation");
}

void HttpClient::deregister(const std::string& session_id) {
  auto cli = impl_->make();
  auto res = cli.Delete("/storage/session/" + util::url_encode(session_id));
  if (!res) Impl::unreachable(res, "deregistration");
  if (res->status != 204) Impl::unexpected(res, "deregistration");
}

void HttpCacheNotifier::notify_expect(const net::Endpoint& element,
                                      const std::string& file_name,
                                      const net::FlowKey& response_flow) {
  json body{{"file_name", file_name},
            {"flow",
             {{"src_ip", response_flow.src_ip},
              {"src_port", response_flow.src_port},
              {"dst_ip", response_flow.dst_ip},
              {"dst_port", response_flow.dst_port}}}};
  httplib::Client cli(element.ip, element.port);
  cli.set_connection_timeout(0, 2'000'000);
  auto res = cli.Post("/expect-content", body.dump(), "application/json");
  if (!res)
    throw ClientError("expect-content notify to " + element.to_string() +
                      " failed: " + httplib::to_string(res.error()));
}

}  // namespace contentnet::controller
