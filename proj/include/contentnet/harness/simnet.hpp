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

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <thread>

#include "contentnet/fabric/network.hpp"
#include "contentnet/net/stream.hpp"

namespace contentnet::harness {

// Virtual time context shared by all connections of one handler.
// Processing takes zero virtual time; reading a segment advances the
// context to the segment's simulated arrival time.
class VClock {
 public:
  explicit VClock(double start_ms = 0) : t_(start_ms) {}
  double now() const {
    std::lock_guard lk(mu_);
    return t_;
  }
  void advance_to(double t) {
    std::lock_guard lk(mu_);
    if (t > t_) t_ = t;
  }

 private:
  mutable std::mutex mu_;
  double t_;
};
using VClockPtr = std::shared_ptr<VClock>;

struct TraceRecord {
  double send_vt = 0;
  net::FlowKey flow;
  std::uint64_t seq = 0;
  std::size_t payload_len = 0;
  fabric::TcpFlags flags;
  fabric::DeliveryTrace trace;
};

// Collects one record per injected segment. Injections from concurrent
// relay directions interleave arbitrarily in wall time, so the dump is
// ordered by deterministic keys (virtual send time, flow, seq).
class TraceLog {
 public:
  void append(TraceRecord rec);
  std::string canonical_text() const;
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::vector<TraceRecord> records_;
};

class SimNet;

// ByteStream whose bytes travel the simulated fabric as MTU-sized
// segments.
class SimStream : public net::ByteStream {
 public:
  struct State;

  explicit SimStream(std::shared_ptr<State> st) : st_(std::move(st)) {}
  ~SimStream() override;

  std::size_t read_some(void* buf, std::size_t max) override;
  void write_all(const void* buf, std::size_t len) override;
  void shutdown_write() override;
  void close() override;
  net::Endpoint local_endpoint() const override;
  net::Endpoint peer_endpoint() const override;
  std::optional<net::Endpoint> original_dst() const override;

  VClockPtr clock() const;

 private:
  std::shared_ptr<State> st_;
};

// Hosts' transport stacks over one shared fabric: listeners accept
// flows steered to them, connections exchange segments, and packets
// that belong to no local flow go to the host's capture tap (this is
// how mirrored traffic reaches a cache).
class SimNet {
 public:
  using Handler = std::function<void(net::StreamPtr)>;
  using Tap = std::function<void(const fabric::Packet& pkt, double ready_vt)>;

  SimNet(fabric::SharedNetwork& fabric,
         std::map<std::string, std::string> addresses);
  ~SimNet();

  SimNet(const SimNet&) = delete;
  SimNet& operator=(const SimNet&) = delete;

  void listen(const std::string& host, std::uint16_t port, Handler handler);
  void set_capture_tap(const std::string& host, Tap tap);

  // Opens a flow from a host towards a (possibly rewritten) address.
  // Throws ConnectError when nothing accepts the first segment.
  net::StreamPtr connect(const std::string& from_host,
                         const net::Endpoint& dst, VClockPtr clock);

  // Dialer for handlers that open onward connections from their host.
  class BoundDialer : public net::Dialer {
   public:
    BoundDialer(SimNet& net, std::string host, VClockPtr clock)
        : net_(net), host_(std::move(host)), clock_(std::move(clock)) {}
    net::StreamPtr connect(const net::Endpoint& dst) override {
      return net_.connect(host_, dst, clock_);
    }

   private:
    SimNet& net_;
    std::string host_;
    VClockPtr clock_;
  };

  TraceLog& trace_log() { return trace_log_; }
  const std::string& ip_of(const std::string& host) const;

  // Unblocks every open stream and joins handler threads.
  void shutdown();

 private:
  friend class SimStream;

  struct HostStack;

  // Injects one segment; returns how many endpoints accepted it.
  int transmit(SimStream::State& from, std::string payload,
               fabric::TcpFlags flags);
  void unregister(const SimStream::State& st);

  fabric::SharedNetwork& fabric_;
  std::map<std::string, std::string> addresses_;
  std::size_t mtu_payload_;
  TraceLog trace_log_;

  std::map<std::string, std::unique_ptr<HostStack>> stacks_;

  std::mutex threads_mu_;
  std::vector<std::thread> handler_threads_;
  std::atomic<std::uint32_t> next_port_{49152};
  std::atomic<bool> shutting_down_{false};
};

}  // namespace contentnet::harness
