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

#include <string>
#include <string_view>

namespace contentnet::cache {

// Result of splitting a captured response stream into status and body.
struct ExtractResult {
  enum class Status {
    ok,
    malformed_head,
    truncated_body,
    // No Content-Length (e.g. chunked); such responses are not cached.
    unsupported_encoding,
  };

  Status status = Status::malformed_head;
  int http_status = 0;
  std::string body;

  bool ok() const { return status == Status::ok; }
};

// Parses an HTTP/1.x response head and returns the Content-Length
// delimited body. Trailing bytes beyond the declared length are
// ignored.
ExtractResult extract_body(std::string_view stream);

}  // namespace contentnet::cache
