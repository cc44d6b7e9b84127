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
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "contentnet/net/types.hpp"

namespace contentnet::cache {

class ReassemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sequence coverage has a hole; the flow cannot be assembled.
class IncompleteStreamError : public ReassemblyError {
 public:
  using ReassemblyError::ReassemblyError;
};

struct TcpSegment {
  net::FlowKey flow;
  // Byte offset of this payload from the start of the stream; capture
  // sources normalize sequence numbers to zero-based offsets.
  std::uint64_t seq = 0;
  std::string payload;
  bool fin = false;
};

// Buffers one-directional capture flows, discards retransmissions and
// rebuilds the byte stream in sequence order once a FIN has been seen.
class Reassembler {
 public:
  struct Options {
    std::size_t per_flow_cap_bytes = 16ull << 20;
    double stale_after_ms = 60'000.0;
  };

  enum class Observe { buffered, duplicate, ignored, complete, abandoned };

  Reassembler();
  explicit Reassembler(Options opts, std::function<double()> now_ms_fn = {});

  Observe observe_segment(const TcpSegment& seg);

  bool has_flow(const net::FlowKey& flow) const;
  bool fin_seen(const net::FlowKey& flow) const;
  // FIN seen and sequence coverage reaches the FIN offset.
  bool complete(const net::FlowKey& flow) const;
  std::size_t flow_count() const { return flows_.size(); }

  // Concatenates payloads ascending by sequence number; requires a FIN
  // and contiguous coverage from the initial sequence number. The flow
  // is dropped afterwards, also on failure.
  std::string reassemble(const net::FlowKey& flow);

  // Drops incomplete flows older than the stale threshold.
  std::vector<net::FlowKey> purge_stale();

 private:
  struct FlowBuffer {
    std::map<std::uint64_t, std::string> segments;  // first payload per seq
    bool fin_seen = false;
    std::uint64_t fin_end = 0;  // stream end offset, valid when fin_seen
    std::uint64_t bytes = 0;
    double first_seen_ms = 0;
  };

  bool coverage_complete(const FlowBuffer& fb) const;

  Options opts_;
  std::function<double()> now_ms_;
  std::map<net::FlowKey, FlowBuffer> flows_;
};

}  // namespace contentnet::cache
