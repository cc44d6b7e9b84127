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

#include "contentnet/proxy/http_request.hpp"

#include <charconv>

#include "contentnet/util/url.hpp"

namespace contentnet::proxy {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

// "host" or "host:port"; returns nullopt on a bad port.
std::optional<net::Endpoint> split_host_port(std::string_view hp,
                                             std::uint16_t default_port) {
  auto colon = hp.rfind(':');
  if (colon == std::string_view::npos)
    return net::Endpoint{std::string(hp), default_port};
  std::string_view port_sv = hp.substr(colon + 1);
  unsigned port = 0;
  auto [p, ec] = std::from_chars(port_sv.begin(), port_sv.end(), port);
  if (ec != std::errc{} || p != port_sv.end() || port == 0 || port > 65535)
    return std::nullopt;
  return net::Endpoint{std::string(hp.substr(0, colon)),
                       static_cast<std::uint16_t>(port)};
}

}  // namespace

ParseStatus parse_request_head(std::string_view data,
                               const std::optional<net::Endpoint>& original_dst,
                               std::string_view index_name,
                               ParsedRequest& out) {
  std::size_t head_end = data.find("\r\n\r\n");
  if (head_end == std::string_view::npos) return ParseStatus::incomplete;

  std::string_view head = data.substr(0, head_end);
  std::size_t line_end = head.find("\r\n");
  std::string_view request_line =
      line_end == std::string_view::npos ? head : head.substr(0, line_end);

  std::size_t sp1 = request_line.find(' ');
  if (sp1 == std::string_view::npos || sp1 == 0) return ParseStatus::malformed;
  std::size_t sp2 = request_line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos || sp2 == sp1 + 1)
    return ParseStatus::malformed;
  std::string_view method = request_line.substr(0, sp1);
  std::string_view target = request_line.substr(sp1 + 1, sp2 - sp1 - 1);
  std::string_view version = request_line.substr(sp2 + 1);
  if (version.substr(0, 5) != "HTTP/") return ParseStatus::malformed;

  // Absolute-form targets ("http://host[:port]/path") show up when a
  // client is configured to use the proxy explicitly.
  std::string_view path = target;
  std::optional<net::Endpoint> target_host;
  if (target.substr(0, 7) == "http://") {
    std::string_view rest = target.substr(7);
    std::size_t slash = rest.find('/');
    std::string_view authority =
        slash == std::string_view::npos ? rest : rest.substr(0, slash);
    target_host = split_host_port(authority, 80);
    if (!target_host || target_host->ip.empty()) return ParseStatus::malformed;
    path = slash == std::string_view::npos ? std::string_view("/")
                                           : rest.substr(slash);
  }
  if (path.empty() || path.front() != '/') return ParseStatus::malformed;

  std::string host_header;
  std::size_t pos = line_end == std::string_view::npos ? head.size()
                                                       : line_end + 2;
  while (pos < head.size()) {
    std::size_t eol = head.find("\r\n", pos);
    std::string_view line = head.substr(
        pos, eol == std::string_view::npos ? head.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? head.size() : eol + 2;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    if (iequals(trim(line.substr(0, colon)), "Host")) {
      host_header = std::string(trim(line.substr(colon + 1)));
      break;
    }
  }

  // Destination precedence: transparent-mode rewrite info, then the
  // absolute-form authority, then the Host header.
  net::Endpoint dst;
  if (original_dst) {
    dst = *original_dst;
  } else if (target_host) {
    dst = *target_host;
  } else if (!host_header.empty()) {
    auto hp = split_host_port(host_header, 80);
    if (!hp) return ParseStatus::malformed;
    dst = *hp;
  } else {
    return ParseStatus::malformed;  // nowhere to go
  }

  std::string name = util::url_decode(path.substr(1));
  if (name.empty()) name = std::string(index_name);

  out.method = std::string(method);
  out.file_name = std::move(name);
  out.host = std::move(host_header);
  out.original_dst_ip = dst.ip;
  out.original_dst_port = dst.port;
  out.raw_head = std::string(data.substr(0, head_end + 4));
  return ParseStatus::ok;
}

}  // namespace contentnet::proxy
