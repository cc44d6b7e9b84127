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
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "contentnet/cache/reassembly.hpp"
#include "contentnet/cache/store.hpp"
#include "contentnet/controller/client.hpp"
#include "contentnet/net/stream.hpp"

namespace contentnet::cache {

// Ties capture, reassembly, naming and serving together: mirrored
// response segments come in, complete flows are resolved against the
// controller's pending table and persisted, and stored objects are
// served back over plain HTTP.
class CacheService {
 public:
  struct Options {
    Reassembler::Options reassembly{};
    bool report_stats_after_store = true;
  };

  CacheService(ContentStore& store, controller::Client& controller);
  CacheService(ContentStore& store, controller::Client& controller,
               Options opts);

  void set_session_id(std::string id);
  std::string session_id() const;

  // Capture path. Returns the stored file name when this segment
  // completed a flow that was resolved and persisted.
  std::optional<std::string> ingest(const TcpSegment& seg);

  // Claims the pending name for the stream's origin and persists the
  // body under it; non-200 and unnamed responses are discarded.
  std::optional<std::string> resolve_and_store(const net::FlowKey& flow,
                                               int status,
                                               const std::string& body);

  // Full HTTP response bytes for GET /<file-name>.
  std::string serve(const std::string& file_name);

  // One serve-side connection: parses the request head and answers.
  // Also accepts the controller's POST /expect-content notification.
  void handle_stream(net::ByteStream& stream);

  void handle_expect(const std::string& file_name, const net::FlowKey& flow);
  // Hint lookup; the mirror flow's dst port is unknown to the
  // controller, so it is ignored when matching.
  std::optional<std::string> expected_name(const net::FlowKey& flow) const;

  void purge_stale_flows();

  std::uint64_t serves() const { return serves_; }
  std::uint64_t stores() const { return stores_; }
  std::uint64_t discards() const { return discards_; }

 private:
  ContentStore& store_;
  controller::Client& controller_;
  Options opts_;

  mutable std::mutex mu_;
  Reassembler reassembler_;
  std::string session_id_;
  // (src_ip, src_port, dst_ip) -> expected file name
  std::map<std::tuple<std::string, std::uint16_t, std::string>, std::string>
      expectations_;

  std::atomic<std::uint64_t> serves_{0};
  std::atomic<std::uint64_t> stores_{0};
  std::atomic<std::uint64_t> discards_{0};
};

}  // namespace contentnet::cache
