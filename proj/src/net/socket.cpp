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

#include "contentnet/net/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace contentnet::net {

namespace {

Endpoint endpoint_of(const sockaddr_in& sa) {
  char buf[INET_ADDRSTRLEN] = {0};
  inet_ntop(AF_INET, &sa.sin_addr, buf, sizeof(buf));
  return {buf, ntohs(sa.sin_port)};
}

class SocketStream : public ByteStream {
 public:
  explicit SocketStream(int fd) : fd_(fd) {
    sockaddr_in sa{};
    socklen_t len = sizeof(sa);
    if (getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len) == 0)
      local_ = endpoint_of(sa);
    len = sizeof(sa);
    if (getpeername(fd_, reinterpret_cast<sockaddr*>(&sa), &len) == 0)
      peer_ = endpoint_of(sa);
  }

  ~SocketStream() override { close(); }

  std::size_t read_some(void* buf, std::size_t max) override {
    while (true) {
      ssize_t n = ::recv(fd_, buf, max, 0);
      if (n >= 0) return static_cast<std::size_t>(n);
      if (errno == EINTR) continue;
      if (errno == ECONNRESET) return 0;
      throw StreamError(std::string("recv: ") + std::strerror(errno));
    }
  }

  void write_all(const void* buf, std::size_t len) override {
    const char* p = static_cast<const char*>(buf);
    while (len > 0) {
      ssize_t n = ::send(fd_, p, len, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw StreamError(std::string("send: ") + std::strerror(errno));
      }
      p += n;
      len -= static_cast<std::size_t>(n);
    }
  }

  void shutdown_write() override { ::shutdown(fd_, SHUT_WR); }

  void close() override {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

  Endpoint local_endpoint() const override { return local_; }
  Endpoint peer_endpoint() const override { return peer_; }

 private:
  int fd_;
  Endpoint local_;
  Endpoint peer_;
};

sockaddr_in resolve(const Endpoint& dst) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(dst.port);
  if (inet_pton(AF_INET, dst.ip.c_str(), &sa.sin_addr) == 1) return sa;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(dst.ip.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw ConnectError("cannot resolve host: " + dst.ip);
  sa.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return sa;
}

}  // namespace

StreamPtr SocketDialer::connect(const Endpoint& dst) {
  sockaddr_in sa = resolve(dst);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw ConnectError(std::string("socket: ") + std::strerror(errno));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    int err = errno;
    ::close(fd);
    throw ConnectError("connect " + dst.to_string() + ": " +
                       std::strerror(err));
  }
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_unique<SocketStream>(fd);
}

TcpListener::TcpListener(const std::string& bind_ip, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0)
    throw StreamError(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  if (inet_pton(AF_INET, bind_ip.c_str(), &sa.sin_addr) != 1)
    throw StreamError("bad bind address: " + bind_ip);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0)
    throw StreamError("bind " + bind_ip + ":" + std::to_string(port) + ": " +
                      std::strerror(errno));
  if (::listen(fd_, 64) != 0)
    throw StreamError(std::string("listen: ") + std::strerror(errno));
  socklen_t len = sizeof(sa);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
  port_ = ntohs(sa.sin_port);
}

TcpListener::~TcpListener() { stop(); }

void TcpListener::serve(const std::function<void(StreamPtr)>& handler) {
  while (!stopping_) {
    sockaddr_in sa{};
    socklen_t len = sizeof(sa);
    int cfd = ::accept(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
    if (cfd < 0) {
      if (stopping_) break;
      if (errno == EINTR) continue;
      break;
    }
    int one = 1;
    setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::thread([handler, cfd] {
      try {
        handler(std::make_unique<SocketStream>(cfd));
      } catch (...) {
      }
    }).detach();
  }
}

void TcpListener::stop() {
  stopping_ = true;
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace contentnet::net
