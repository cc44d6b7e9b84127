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

#include "contentnet/cache/http_response.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace contentnet::cache {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

ExtractResult extract_body(std::string_view stream) {
  ExtractResult res;

  std::size_t head_end = stream.find("\r\n\r\n");
  if (head_end == std::string_view::npos) return res;  // malformed_head

  std::string_view head = stream.substr(0, head_end);
  std::size_t line_end = head.find("\r\n");
  std::string_view status_line =
      line_end == std::string_view::npos ? head : head.substr(0, line_end);

  // "HTTP/1.x NNN reason"
  if (status_line.substr(0, 5) != "HTTP/") return res;
  std::size_t sp1 = status_line.find(' ');
  if (sp1 == std::string_view::npos) return res;
  std::string_view code = status_line.substr(sp1 + 1);
  std::size_t sp2 = code.find(' ');
  if (sp2 != std::string_view::npos) code = code.substr(0, sp2);
  int http_status = 0;
  auto [p, ec] = std::from_chars(code.begin(), code.end(), http_status);
  if (ec != std::errc{} || p != code.end() || http_status < 100 ||
      http_status > 599)
    return res;
  res.http_status = http_status;

  std::optional<std::uint64_t> content_length;
  bool chunked = false;
  std::size_t pos = line_end == std::string_view::npos ? head.size()
                                                       : line_end + 2;
  while (pos < head.size()) {
    std::size_t eol = head.find("\r\n", pos);
    std::string_view line = head.substr(
        pos, eol == std::string_view::npos ? head.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? head.size() : eol + 2;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    std::string_view name = trim(line.substr(0, colon));
    std::string_view value = trim(line.substr(colon + 1));
    if (iequals(name, "Content-Length")) {
      std::uint64_t cl = 0;
      auto [vp, vec] = std::from_chars(value.begin(), value.end(), cl);
      if (vec != std::errc{} || vp != value.end()) {
        res.status = ExtractResult::Status::malformed_head;
        return res;
      }
      content_length = cl;
    } else if (iequals(name, "Transfer-Encoding") &&
               value.find("chunked") != std::string_view::npos) {
      chunked = true;
    }
  }

  if (chunked || !content_length) {
    res.status = ExtractResult::Status::unsupported_encoding;
    return res;
  }

  std::string_view body = stream.substr(head_end + 4);
  if (body.size() < *content_length) {
    res.status = ExtractResult::Status::truncated_body;
    return res;
  }
  res.body.assign(body.substr(0, *content_length));
  res.status = ExtractResult::Status::ok;
  return res;
}

}  // namespace contentnet::cache
