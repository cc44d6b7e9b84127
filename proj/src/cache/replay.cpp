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

#include "contentnet/cache/replay.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace contentnet::cache {

namespace {

constexpr char kMagic[] = "CNSEG1\n";
constexpr std::size_t kMagicLen = 7;

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
bool get_le(std::istream& in, T& v) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
  v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(buf[i]) << (8 * i);
  return true;
}

void put_str(std::ostream& out, const std::string& s) {
  if (s.size() > 0xffff) throw ReplayError("address string too long");
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool get_str(std::istream& in, std::string& s) {
  std::uint16_t len = 0;
  if (!get_le(in, len)) return false;
  s.resize(len);
  return static_cast<bool>(in.read(s.data(), len));
}

}  // namespace

void write_segments(std::ostream& out, const std::vector<TcpSegment>& segs) {
  out.write(kMagic, kMagicLen);
  for (const auto& seg : segs) {
    if (seg.payload.empty() && !seg.fin)
      throw ReplayError("segment payload may be empty only on FIN");
    put_str(out, seg.flow.src_ip);
    put_le<std::uint16_t>(out, seg.flow.src_port);
    put_str(out, seg.flow.dst_ip);
    put_le<std::uint16_t>(out, seg.flow.dst_port);
    put_le<std::uint64_t>(out, seg.seq);
    put_le<std::uint8_t>(out, seg.fin ? 1 : 0);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(seg.payload.size()));
    out.write(seg.payload.data(),
              static_cast<std::streamsize>(seg.payload.size()));
  }
  if (!out) throw ReplayError("write failed");
}

void write_segments_file(const std::filesystem::path& path,
                         const std::vector<TcpSegment>& segs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ReplayError("cannot open for write: " + path.string());
  write_segments(out, segs);
}

std::vector<TcpSegment> read_segments(std::istream& in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw ReplayError("bad magic; not a segment capture file");

  std::vector<TcpSegment> segs;
  while (true) {
    TcpSegment seg;
    if (!get_str(in, seg.flow.src_ip)) {
      if (in.eof()) break;
      throw ReplayError("truncated record");
    }
    std::uint8_t flags = 0;
    std::uint32_t len = 0;
    if (!get_le(in, seg.flow.src_port) || !get_str(in, seg.flow.dst_ip) ||
        !get_le(in, seg.flow.dst_port) || !get_le(in, seg.seq) ||
        !get_le(in, flags) || !get_le(in, len))
      throw ReplayError("truncated record");
    seg.fin = (flags & 1) != 0;
    seg.payload.resize(len);
    if (len > 0 && !in.read(seg.payload.data(), len))
      throw ReplayError("truncated payload");
    if (seg.payload.empty() && !seg.fin)
      throw ReplayError("segment payload may be empty only on FIN");
    segs.push_back(std::move(seg));
  }
  return segs;
}

std::vector<TcpSegment> read_segments_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReplayError("cannot open capture file: " + path.string());
  return read_segments(in);
}

}  // namespace contentnet::cache
