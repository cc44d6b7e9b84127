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

#include "contentnet/cache/reassembly.hpp"

#include <chrono>

namespace contentnet::cache {

namespace {

double steady_now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Reassembler::Reassembler() : Reassembler(Options{}) {}

Reassembler::Reassembler(Options opts, std::function<double()> now_ms_fn)
    : opts_(opts), now_ms_(now_ms_fn ? std::move(now_ms_fn) : steady_now_ms) {}

Reassembler::Observe Reassembler::observe_segment(const TcpSegment& seg) {
  // Empty non-FIN segments carry nothing worth buffering (pure acks).
  if (seg.payload.empty() && !seg.fin) return Observe::ignored;

  auto it = flows_.find(seg.flow);
  if (it == flows_.end()) {
    it = flows_.emplace(seg.flow, FlowBuffer{}).first;
    it->second.first_seen_ms = now_ms_();
  }
  FlowBuffer& fb = it->second;

  bool duplicate = false;
  if (!seg.payload.empty()) {
    if (fb.segments.count(seg.seq)) {
      duplicate = true;  // retransmission, first payload wins
    } else {
      if (fb.bytes + seg.payload.size() > opts_.per_flow_cap_bytes) {
        flows_.erase(it);
        return Observe::abandoned;
      }
      fb.segments.emplace(seg.seq, seg.payload);
      fb.bytes += seg.payload.size();
    }
  }
  if (seg.fin && !fb.fin_seen) {
    fb.fin_seen = true;
    fb.fin_end = seg.seq + seg.payload.size();
  }

  if (fb.fin_seen && coverage_complete(fb)) return Observe::complete;
  return duplicate ? Observe::duplicate : Observe::buffered;
}

bool Reassembler::has_flow(const net::FlowKey& flow) const {
  return flows_.count(flow) > 0;
}

bool Reassembler::fin_seen(const net::FlowKey& flow) const {
  auto it = flows_.find(flow);
  return it != flows_.end() && it->second.fin_seen;
}

bool Reassembler::coverage_complete(const FlowBuffer& fb) const {
  std::uint64_t end = 0;
  for (const auto& [seq, payload] : fb.segments) {
    if (seq > end) return false;  // gap
    std::uint64_t seg_end = seq + payload.size();
    if (seg_end > end) end = seg_end;
  }
  return end == fb.fin_end;
}

bool Reassembler::complete(const net::FlowKey& flow) const {
  auto it = flows_.find(flow);
  return it != flows_.end() && it->second.fin_seen &&
         coverage_complete(it->second);
}

std::string Reassembler::reassemble(const net::FlowKey& flow) {
  auto it = flows_.find(flow);
  if (it == flows_.end())
    throw ReassemblyError("no such flow: " + flow.to_string());
  FlowBuffer fb = std::move(it->second);
  flows_.erase(it);

  if (!fb.fin_seen)
    throw ReassemblyError("reassemble before FIN on flow " + flow.to_string());

  std::string out;
  out.reserve(fb.bytes);
  std::uint64_t end = 0;
  for (const auto& [seq, payload] : fb.segments) {
    if (seq > end)
      throw IncompleteStreamError("gap in sequence coverage at offset " +
                                  std::to_string(end) + " on flow " +
                                  flow.to_string());
    std::uint64_t seg_end = seq + payload.size();
    if (seg_end <= end) continue;  // fully covered by earlier data
    out.append(payload, end - seq, std::string::npos);
    end = seg_end;
  }
  if (end != fb.fin_end)
    throw IncompleteStreamError("stream ends at " + std::to_string(end) +
                                " but FIN says " + std::to_string(fb.fin_end) +
                                " on flow " + flow.to_string());
  return out;
}

std::vector<net::FlowKey> Reassembler::purge_stale() {
  std::vector<net::FlowKey> dropped;
  double now = now_ms_();
  for (auto it = flows_.begin(); it != flows_.end();) {
    if (now - it->second.first_seen_ms > opts_.stale_after_ms) {
      dropped.push_back(it->first);
      it = flows_.erase(it);
    } else {
      ++it;
    }
  }
  return dropped;
}

}  // namespace contentnet::cache
