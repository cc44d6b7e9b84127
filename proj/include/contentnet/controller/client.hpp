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
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "contentnet/controller/types.hpp"

namespace contentnet::controller {

// Controller not reachable or replied with an unexpected status.
class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Northbound API as seen by the proxy and the caches.
class Client {
 public:
  virtual ~Client() = default;

  virtual std::optional<net::Endpoint> lookup_content(
      const std::string& file_name) = 0;
  virtual void report_metadata(const ContentMetadata& meta) = 0;

  // Claims (returns and removes) the pending file name for an origin.
  virtual std::optional<std::string> claim_pending(
      const std::string& source_ip) = 0;

  virtual std::string register_storage(const StorageCapability& cap) = 0;
  virtual void heartbeat(const std::string& session_id) = 0;
  virtual void report_stats(const std::string& session_id,
                            std::uint64_t used_bytes,
                            std::uint64_t object_count) = 0;
  virtual void confirm_stored(const std::string& session_id,
                              const std::string& file_name) = 0;
  virtual void deregister(const std::string& session_id) = 0;
};

// Speaks the controller's HTTP/JSON API.
class HttpClient : public Client {
 public:
  explicit HttpClient(std::string base_url, int timeout_ms = 5000);
  ~HttpClient() override;

  std::optional<net::Endpoint> lookup_content(
      const std::string& file_name) override;
  void report_metadata(const ContentMetadata& meta) override;
  std::optional<std::string> claim_pending(
      const std::string& source_ip) override;
  std::string register_storage(const StorageCapability& cap) override;
  void heartbeat(const std::string& session_id) override;
  void report_stats(const std::string& session_id, std::uint64_t used_bytes,
                    std::uint64_t object_count) override;
  void confirm_stored(const std::string& session_id,
                      const std::string& file_name) override;
  void deregister(const std::string& session_id) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace contentnet::controller
