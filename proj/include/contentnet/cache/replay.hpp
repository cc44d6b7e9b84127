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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "contentnet/cache/reassembly.hpp"

namespace contentnet::cache {

// Length-prefixed binary capture format for offline reassembly:
//
//   file   := magic record*
//   magic  := "CNSEG1\n"
//   record := u16 src_ip_len, src_ip bytes, u16 src_port,
//             u16 dst_ip_len, dst_ip bytes, u16 dst_port,
//             u64 seq, u8 flags (bit 0 = FIN), u32 payload_len,
//             payload bytes
//
// All integers little-endian.

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_segments(std::ostream& out, const std::vector<TcpSegment>& segs);
void write_segments_file(const std::filesystem::path& path,
                         const std::vector<TcpSegment>& segs);

std::vector<TcpSegment> read_segments(std::istream& in);
std::vector<TcpSegment> read_segments_file(const std::filesystem::path& path);

}  // namespace contentnet::cache
