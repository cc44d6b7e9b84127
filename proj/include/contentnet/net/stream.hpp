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

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "contentnet/net/types.hpp"

namespace contentnet::net {

class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConnectError : public StreamError {
 public:
  using StreamError::StreamError;
};

// Blocking duplex byte stream. Implemented over real TCP sockets, over
// the simulated fabric, and over in-memory pipes for tests.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  // Returns the number of bytes read, 0 on orderly EOF.
  virtual std::size_t read_some(void* buf, std::size_t max) = 0;
  virtual void write_all(const void* buf, std::size_t len) = 0;

  // Half-close: signals EOF to the peer, reads stay usable.
  virtual void shutdown_write() = 0;
  virtual void close() = 0;

  virtual Endpoint local_endpoint() const = 0;
  virtual Endpoint peer_endpoint() const = 0;

  // Where the flow was headed before any in-network rewrite; only
  // transparent-proxy transports can answer.
  virtual std::optional<Endpoint> original_dst() const { return {}; }

  void write_all(const std::string& s) { write_all(s.data(), s.size()); }

  // Reads until EOF or `max` bytes.
  std::string read_to_end(std::size_t max = SIZE_MAX);
};

using StreamPtr = std::unique_ptr<ByteStream>;

class Dialer {
 public:
  virtual ~Dialer() = default;
  // Throws ConnectError when the destination refuses or is unknown.
  virtual StreamPtr connect(const Endpoint& dst) = 0;
};

}  // namespace contentnet::net
