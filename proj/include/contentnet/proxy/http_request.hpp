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

#include <optional>
#include <string>
#include <string_view>

#include "contentnet/net/types.hpp"

namespace contentnet::proxy {

struct ParsedRequest {
  std::string method;
  // Request path with the leading "/" stripped; query string kept as
  // part of the name; bare "/" maps to the configured index name.
  std::string file_name;
  std::string host;  // Host header value (may carry :port)
  std::string original_dst_ip;
  std::uint16_t original_dst_port = 0;
  std::string raw_head;  // bytes through CRLFCRLF as received
};

enum class ParseStatus {
  ok,
  incomplete,  // no CRLFCRLF yet, caller must buffer more
  malformed,
};

// Parses an HTTP/1.x request head. `original_dst` is the pre-rewrite
// destination when the transport knows it (transparent mode); without
// it the Host header decides where the request was headed.
ParseStatus parse_request_head(std::string_view data,
                               const std::optional<net::Endpoint>& original_dst,
                               std::string_view index_name,
                               ParsedRequest& out);

}  // namespace contentnet::proxy
