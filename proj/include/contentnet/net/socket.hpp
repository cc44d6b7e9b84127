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
#include <functional>

#include "contentnet/net/stream.hpp"

namespace contentnet::net {

// TCP-backed ByteStream / Dialer for the standalone daemons.

class SocketDialer : public Dialer {
 public:
  StreamPtr connect(const Endpoint& dst) override;
};

// Minimal accept loop; the handler runs on a detached thread per
// connection.
class TcpListener {
 public:
  TcpListener(const std::string& bind_ip, std::uint16_t port);
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }

  // Blocks; returns when stop() is called.
  void serve(const std::function<void(StreamPtr)>& handler);
  void stop();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
};

}  // namespace contentnet::net
