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

#include <map>
#include <mutex>
#include <string>

#include "contentnet/harness/content.hpp"
#include "contentnet/net/stream.hpp"

namespace contentnet::harness {

// Minimal scripted HTTP/1.1 file server: GET answers from the generated
// content set with Content-Length bodies and counts per-file requests.
class OriginServer {
 public:
  explicit OriginServer(const ContentSet& content);

  void handle_stream(net::ByteStream& stream);

  std::map<std::string, std::uint64_t> request_counts() const;
  std::uint64_t requests_for(const std::string& name) const;
  std::uint64_t total_requests() const;

 private:
  const ContentSet& content_;
  mutable std::mutex mu_;
  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

}  // namespace contentnet::harness
