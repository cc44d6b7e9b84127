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

#include <compare>
#include <cstdint>
#include <string>

namespace contentnet::net {

struct Endpoint {
  std::string ip;
  std::uint16_t port = 0;

  auto operator<=>(const Endpoint&) const = default;
  std::string to_string() const { return ip + ":" + std::to_string(port); }
};

// Identifies one direction of a TCP conversation.
struct FlowKey {
  std::string src_ip;
  std::uint16_t src_port = 0;
  std::string dst_ip;
  std::uint16_t dst_port = 0;

  auto operator<=>(const FlowKey&) const = default;

  FlowKey reversed() const { return {dst_ip, dst_port, src_ip, src_port}; }
  Endpoint src() const { return {src_ip, src_port}; }
  Endpoint dst() const { return {dst_ip, dst_port}; }
  std::string to_string() const {
    return src().to_string() + "->" + dst().to_string();
  }
};

}  // namespace contentnet::net
