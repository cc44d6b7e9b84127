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
#include <set>
#include <string>

#include "contentnet/net/types.hpp"

namespace contentnet::controller {

// The five-tuple that binds a file name to the TCP flow requesting it:
// name plus destination/source address of the client's connection.
struct ContentMetadata {
  std::string file_name;
  std::string dst_ip;
  std::uint16_t dst_port = 0;
  std::string src_ip;
  std::uint16_t src_port = 0;

  bool valid() const {
    return !file_name.empty() && dst_port >= 1 && src_port >= 1 &&
           !dst_ip.empty() && !src_ip.empty();
  }
};

enum class StorageOp { store, serve };

struct StorageCapability {
  std::string element_ip;
  std::uint16_t element_port = 0;
  std::uint64_t capacity_bytes = 0;
  std::set<StorageOp> ops;
};

enum class SessionState { active, expired, closed };

inline const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::active:
      return "active";
    case SessionState::expired:
      return "expired";
    case SessionState::closed:
      return "closed";
  }
  return "?";
}

}  // namespace contentnet::controller
