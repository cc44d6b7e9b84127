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

#include "contentnet/harness/origin_server.hpp"

#include "contentnet/util/url.hpp"

namespace contentnet::harness {

namespace {

constexpr std::size_t kMaxHead = 16 * 1024;

std::string text_response(int status, const std::string& reason,
                          const std::string& body) {
  return "HTTP/1.1 " + std::to_string(status) + " " + reason +
         "\r\nContent-Length: " + std::to_string(body.size()) +
         "\r\nConnection: close\r\n\r\n" + body;
}

}  // namespace

OriginServer::OriginServer(const ContentSet& content) : content_(content) {}

void OriginServer::handle_stream(net::ByteStream& stream) {
  std::string buf;
  char chunk[4096];
  std::size_t head_end = std::string::npos;
  while (buf.size() < kMaxHead) {
    head_end = buf.find("\r\n\r\n");
    if (head_end != std::string::npos) break;
    std::size_t n = stream.read_some(chunk, sizeof(chunk));
    if (n == 0) break;
    buf.append(chunk, n);
  }
  if (head_end == std::string::npos) {
    stream.write_all(text_response(400, "Bad Request", ""));
    stream.close();
    return;
  }

  std::string line = buf.substr(0, buf.find("\r\n"));
  std::size_t sp1 = line.find(' ');
  std::size_t sp2 = sp1 == std::string::npos ? std::string::npos
                                             : line.find(' ', sp1 + 1);
  if (sp1 == std::string::npos || sp2 == std::string::npos) {
    stream.write_all(text_response(400, "Bad Request", ""));
    stream.close();
    return;
  }
  std::string method = line.substr(0, sp1);
  std::string target = line.substr(sp1 + 1, sp2 - sp1 - 1);
  if (method != "GET") {
    stream.write_all(text_response(405, "Method Not Allowed", ""));
    stream.close();
    return;
  }

  // Query strings stay part of the content name in this system.
  std::string name = target;
  if (!name.empty() && name.front() == '/') name.erase(0, 1);
  name = util::url_decode(name);

  auto it = content_.find(name);
  {
    std::lock_guard lk(mu_);
    ++total_;
    ++counts_[name];
  }
  if (it == content_.end()) {
    stream.write_all(text_response(404, "Not Found", "no such file\n"));
    stream.close();
    return;
  }
  std::string head =
      "HTTP/1.1 200 OK\r\nContent-Length: " +
      std::to_string(it->second.body.size()) +
      "\r\nContent-Type: application/octet-stream\r\nConnection: close\r\n\r\n";
  stream.write_all(head);
  stream.write_all(it->second.body);
  stream.close();
}

std::map<std::string, std::uint64_t> OriginServer::request_counts() const {
  std::lock_guard lk(mu_);
  return counts_;
}

std::uint64_t OriginServer::requests_for(const std::string& name) const {
  std::lock_guard lk(mu_);
  auto it = counts_.find(name);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t OriginServer::total_requests() const {
  std::lock_guard lk(mu_);
  return total_;
}

}  // namespace contentnet::harness
