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

#include "contentnet/harness/simnet.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace contentnet::harness {

// ---------------------------------------------------------------- TraceLog

void TraceLog::append(TraceRecord rec) {
  std::lock_guard lk(mu_);
  records_.push_back(std::move(rec));
}

std::size_t TraceLog::size() const {
  std::lock_guard lk(mu_);
  return records_.size();
}

void TraceLog::clear() {
  std::lock_guard lk(mu_);
  records_.clear();
}

std::string TraceLog::canonical_text() const {
  std::vector<TraceRecord> recs;
  {
    std::lock_guard lk(mu_);
    recs = records_;
  }
  std::sort(recs.begin(), recs.end(),
            [](const TraceRecord& a, const TraceRecord& b) {
              return std::tie(a.send_vt, a.flow, a.seq, a.payload_len) <
                     std::tie(b.send_vt, b.flow, b.seq, b.payload_len);
            });
  std::ostringstream os;
  for (const auto& r : recs) {
    char head[256];
    std::snprintf(head, sizeof(head), "t=%.6f %s seq=%llu len=%zu flags=%s | ",
                  r.send_vt, r.flow.to_string().c_str(),
                  static_cast<unsigned long long>(r.seq), r.payload_len,
                  r.flags.to_string().c_str());
    os << head << r.trace.to_string() << "\n";
  }
  return os.str();
}

// --------------------------------------------------------------- SimStream

struct SimStream::State {
  SimNet* net = nullptr;
  std::string host;
  net::Endpoint local;
  net::Endpoint peer;
  std::optional<net::Endpoint> orig_dst;
  VClockPtr clock;

  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::pair<std::string, double>> inbox;  // payload, ready_vt
  double eof_vt = 0;
  bool eof = false;
  bool closed = false;
  bool fin_sent = false;
  std::uint64_t tx_seq = 0;

  void deliver(std::string payload, bool fin, double ready_vt) {
    std::lock_guard lk(mu);
    if (!payload.empty()) inbox.emplace_back(std::move(payload), ready_vt);
    if (fin && !eof) {
      eof = true;
      eof_vt = ready_vt;
    }
    cv.notify_all();
  }

  void force_eof() {
    std::lock_guard lk(mu);
    eof = true;
    cv.notify_all();
  }
};

SimStream::~SimStream() {
  try {
    close();
  } catch (...) {
  }
}

std::size_t SimStream::read_some(void* buf, std::size_t max) {
  std::unique_lock lk(st_->mu);
  st_->cv.wait(lk, [&] { return !st_->inbox.empty() || st_->eof; });
  if (st_->inbox.empty()) {
    st_->clock->advance_to(st_->eof_vt);
    return 0;
  }
  auto& [payload, vt] = st_->inbox.front();
  std::size_t n = std::min(max, payload.size());
  std::memcpy(buf, payload.data(), n);
  st_->clock->advance_to(vt);
  if (n == payload.size())
    st_->inbox.pop_front();
  else
    payload.erase(0, n);
  return n;
}

void SimStream::write_all(const void* buf, std::size_t len) {
  const char* p = static_cast<const char*>(buf);
  std::size_t mtu = st_->net->mtu_payload_;
  while (len > 0) {
    {
      std::lock_guard lk(st_->mu);
      if (st_->closed || st_->fin_sent)
        throw net::StreamError("write on closed stream");
    }
    std::size_t n = std::min(len, mtu);
    st_->net->transmit(*st_, std::string(p, n), {});
    p += n;
    len -= n;
  }
}

void SimStream::shutdown_write() {
  {
    std::lock_guard lk(st_->mu);
    if (st_->fin_sent) return;
    st_->fin_sent = true;
  }
  st_->net->transmit(*st_, "", fabric::TcpFlags{.fin = true});
}

void SimStream::close() {
  shutdown_write();
  bool was_closed;
  {
    std::lock_guard lk(st_->mu);
    was_closed = st_->closed;
    st_->closed = true;
    st_->cv.notify_all();
  }
  if (!was_closed) st_->net->unregister(*st_);
}

net::Endpoint SimStream::local_endpoint() const { return st_->local; }
net::Endpoint SimStream::peer_endpoint() const { return st_->peer; }
std::optional<net::Endpoint> SimStream::original_dst() const {
  return st_->orig_dst;
}
VClockPtr SimStream::clock() const { return st_->clock; }

// ------------------------------------------------------------------ SimNet

struct SimNet::HostStack {
  std::mutex mu;
  std::map<std::uint16_t, Handler> listeners;
  // (local ip, local port, peer ip, peer port) -> connection state
  std::map<std::tuple<std::string, std::uint16_t, std::string, std::uint16_t>,
           std::shared_ptr<SimStream::State>>
      conns;
  Tap tap;
};

SimNet::SimNet(fabric::SharedNetwork& fabric,
               std::map<std::string, std::string> addresses)
    : fabric_(fabric), addresses_(std::move(addresses)) {
  mtu_payload_ = fabric_.with(
      [](const fabric::Network& net) { return net.mtu_payload(); });
  fabric_.with([&](const fabric::Network& net) {
    for (const auto& [host, ip] : addresses_) {
      if (!net.topology().is_host(host))
        throw net::StreamError("addressed node is not a host: " + host);
    }
    for (const auto& [host, sw] : net.topology().hosts())
      stacks_.emplace(host, std::make_unique<HostStack>());
    return 0;
  });
}

SimNet::~SimNet() { shutdown(); }

const std::string& SimNet::ip_of(const std::string& host) const {
  auto it = addresses_.find(host);
  if (it == addresses_.end())
    throw net::StreamError("host has no address: " + host);
  return it->second;
}

void SimNet::listen(const std::string& host, std::uint16_t port,
                    Handler handler) {
  auto it = stacks_.find(host);
  if (it == stacks_.end()) throw net::StreamError("unknown host: " + host);
  std::lock_guard lk(it->second->mu);
  it->second->listeners[port] = std::move(handler);
}

void SimNet::set_capture_tap(const std::string& host, Tap tap) {
  auto it = stacks_.find(host);
  if (it == stacks_.end()) throw net::StreamError("unknown host: " + host);
  std::lock_guard lk(it->second->mu);
  it->second->tap = std::move(tap);
}

net::StreamPtr SimNet::connect(const std::string& from_host,
                               const net::Endpoint& dst, VClockPtr clock) {
  auto it = stacks_.find(from_host);
  if (it == stacks_.end())
    throw net::ConnectError("unknown host: " + from_host);
  if (!clock) clock = std::make_shared<VClock>(0);

  auto st = std::make_shared<SimStream::State>();
  st->net = this;
  st->host = from_host;
  st->local = {ip_of(from_host),
               static_cast<std::uint16_t>(next_port_.fetch_add(1))};
  st->peer = dst;
  st->clock = std::move(clock);
  {
    std::lock_guard lk(it->second->mu);
    it->second->conns[{st->local.ip, st->local.port, dst.ip, dst.port}] = st;
  }

  int accepted = transmit(*st, "", fabric::TcpFlags{.syn = true});
  if (accepted == 0) {
    unregister(*st);
    st->closed = true;
    throw net::ConnectError("connection to " + dst.to_string() +
                            " refused: no endpoint accepted it");
  }
  return std::make_unique<SimStream>(std::move(st));
}

void SimNet::unregister(const SimStream::State& st) {
  auto it = stacks_.find(st.host);
  if (it == stacks_.end()) return;
  std::lock_guard lk(it->second->mu);
  it->second->conns.erase(
      {st.local.ip, st.local.port, st.peer.ip, st.peer.port});
}

int SimNet::transmit(SimStream::State& from, std::string payload,
                     fabric::TcpFlags flags) {
  if (shutting_down_) return 0;
  fabric::Packet pkt;
  pkt.flow = {from.local.ip, from.local.port, from.peer.ip, from.peer.port};
  pkt.flags = flags;
  pkt.seq = from.tx_seq;
  std::size_t len = payload.size();
  pkt.payload = std::move(payload);

  double send_vt = from.clock->now();
  fabric::DeliveryTrace trace = fabric_.with(
      [&](fabric::Network& net) { return net.inject_packet(from.host, pkt); });
  from.tx_seq += len;
  trace_log_.append({send_vt, pkt.flow, pkt.seq, len, flags, trace});

  struct ConnDelivery {
    std::shared_ptr<SimStream::State> st;
    std::string payload;
    bool fin;
    double vt;
  };
  struct TapDelivery {
    Tap tap;
    fabric::Packet pkt;
    double vt;
  };
  struct Accept {
    Handler handler;
    std::shared_ptr<SimStream::State> st;
  };
  std::vector<ConnDelivery> conn_deliveries;
  std::vector<TapDelivery> tap_deliveries;
  std::vector<Accept> accepts;

  for (auto& d : trace.deliveries) {
    double ready_vt = send_vt + d.latency_ms;
    auto stack_it = stacks_.find(d.host);
    if (stack_it == stacks_.end()) continue;
    HostStack& stack = *stack_it->second;

    std::lock_guard lk(stack.mu);
    const auto& f = d.packet.flow;
    auto exact = stack.conns.find({f.dst_ip, f.dst_port, f.src_ip, f.src_port});
    if (exact != stack.conns.end()) {
      conn_deliveries.push_back({exact->second, std::move(d.packet.payload),
                                 d.packet.flags.fin, ready_vt});
      continue;
    }
    if (d.packet.flags.syn) {
      auto listener = stack.listeners.find(f.dst_port);
      if (listener != stack.listeners.end()) {
        auto st = std::make_shared<SimStream::State>();
        st->net = this;
        st->host = d.host;
        st->local = {f.dst_ip, f.dst_port};
        st->peer = {f.src_ip, f.src_port};
        st->orig_dst = d.packet.original_dst;
        st->clock = std::make_shared<VClock>(ready_vt);
        stack.conns[{st->local.ip, st->local.port, st->peer.ip,
                     st->peer.port}] = st;
        accepts.push_back({listener->second, std::move(st)});
        continue;
      }
    }
    // A flow whose source was rewritten upstream (NAT return path)
    // still reaches its socket via the local port.
    std::shared_ptr<SimStream::State> by_port;
    bool unique = true;
    for (const auto& [key, st] : stack.conns) {
      if (std::get<1>(key) == f.dst_port) {
        if (by_port) unique = false;
        by_port = st;
      }
    }
    if (by_port && unique) {
      conn_deliveries.push_back({std::move(by_port),
                                 std::move(d.packet.payload),
                                 d.packet.flags.fin, ready_vt});
      continue;
    }
    if (stack.tap) {
      tap_deliveries.push_back({stack.tap, std::move(d.packet), ready_vt});
      continue;
    }
    // Nothing listening and no tap: the segment evaporates.
  }

  // Taps run before stream deliveries so a forked FIN finishes the
  // cache's store before the primary flow unblocks.
  for (auto& t : tap_deliveries) {
    try {
      t.tap(t.pkt, t.vt);
    } catch (const std::exception& e) {
      spdlog::warn("simnet: capture tap failed: {}", e.what());
    }
  }
  for (auto& a : accepts) {
    auto stream = std::make_unique<SimStream>(a.st);
    std::lock_guard lk(threads_mu_);
    handler_threads_.emplace_back(
        [handler = std::move(a.handler), s = std::move(stream)]() mutable {
          try {
            handler(std::move(s));
          } catch (const std::exception& e) {
            spdlog::warn("simnet: handler failed: {}", e.what());
          }
        });
  }
  for (auto& c : conn_deliveries)
    c.st->deliver(std::move(c.payload), c.fin, c.vt);

  return static_cast<int>(conn_deliveries.size() + accepts.size());
}

void SimNet::shutdown() {
  if (shutting_down_.exchange(true)) return;
  for (auto& [host, stack] : stacks_) {
    std::vector<std::shared_ptr<SimStream::State>> conns;
    {
      std::lock_guard lk(stack->mu);
      for (auto& [key, st] : stack->conns) conns.push_back(st);
    }
    for (auto& st : conns) st->force_eof();
  }
  std::vector<std::thread> threads;
  {
    std::lock_guard lk(threads_mu_);
    threads.swap(handler_threads_);
  }
  for (auto& t : threads)
    if (t.joinable()) t.join();
}

}  // namespace contentnet::harness
