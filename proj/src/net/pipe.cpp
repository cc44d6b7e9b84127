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

#include "contentnet/net/pipe.hpp"

#include <algorithm>
#include <cstring>
#include <memory>

namespace contentnet::net {

std::string ByteStream::read_to_end(std::size_t max) {
  std::string out;
  char buf[16384];
  while (out.size() < max) {
    std::size_t want = std::min(sizeof(buf), max - out.size());
    std::size_t n = read_some(buf, want);
    if (n == 0) break;
    out.append(buf, n);
  }
  return out;
}

namespace {

// One direction of the pipe.
struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<char> data;
  bool eof = false;
  bool broken = false;

  void push(const void* buf, std::size_t len) {
    std::lock_guard lk(mu);
    if (eof || broken) throw StreamError("write on closed pipe");
    const char* p = static_cast<const char*>(buf);
    data.insert(data.end(), p, p + len);
    cv.notify_all();
  }

  std::size_t pop(void* buf, std::size_t max) {
    std::unique_lock lk(mu);
    cv.wait(lk, [&] { return !data.empty() || eof || broken; });
    if (data.empty()) {
      if (broken) throw StreamError("pipe reset");
      return 0;
    }
    std::size_t n = std::min(max, data.size());
    auto first = data.begin();
    auto last = first + static_cast<std::ptrdiff_t>(n);
    std::copy(first, last, static_cast<char*>(buf));
    data.erase(first, last);
    return n;
  }

  void close(bool abort) {
    std::lock_guard lk(mu);
    if (abort && !eof) broken = true;
    eof = true;
    cv.notify_all();
  }
};

class PipeStream : public ByteStream {
 public:
  PipeStream(std::shared_ptr<Channel> rx, std::shared_ptr<Channel> tx,
             Endpoint local, Endpoint peer)
      : rx_(std::move(rx)),
        tx_(std::move(tx)),
        local_(std::move(local)),
        peer_(std::move(peer)) {}

  ~PipeStream() override { close(); }

  std::size_t read_some(void* buf, std::size_t max) override {
    return rx_->pop(buf, max);
  }
  void write_all(const void* buf, std::size_t len) override {
    tx_->push(buf, len);
  }
  void shutdown_write() override { tx_->close(false); }
  void close() override {
    tx_->close(false);
    rx_->close(false);
  }
  Endpoint local_endpoint() const override { return local_; }
  Endpoint peer_endpoint() const override { return peer_; }

 private:
  std::shared_ptr<Channel> rx_;
  std::shared_ptr<Channel> tx_;
  Endpoint local_;
  Endpoint peer_;
};

}  // namespace

std::pair<StreamPtr, StreamPtr> make_pipe(Endpoint a_end, Endpoint b_end) {
  auto ab = std::make_shared<Channel>();
  auto ba = std::make_shared<Channel>();
  auto a = std::make_unique<PipeStream>(ba, ab, a_end, b_end);
  auto b = std::make_unique<PipeStream>(ab, ba, b_end, a_end);
  return {std::move(a), std::move(b)};
}

}  // namespace contentnet::net
