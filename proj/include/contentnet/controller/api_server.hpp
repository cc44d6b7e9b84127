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

#include <memory>
#include <string>

#include "contentnet/controller/core.hpp"

namespace contentnet::controller {

// HTTP/JSON northbound API:
//   GET    /content?name=<uri>         200 {"ip","port"} | 404
//   POST   /metadata                   204
//   GET    /pending?source_ip=<ip>     200 {"file_name"} | 404
//   POST   /storage/register           200 {"session_id"}
//   POST   /storage/heartbeat          204
//   POST   /storage/stats              204
//   POST   /storage/confirm            204
//   DELETE /storage/session/<id>       204
//   GET    /admin/state                200 state dump
class ApiServer {
 public:
  // port 0 binds an ephemeral port.
  ApiServer(Core& core, std::string bind_ip = "127.0.0.1", int port = 0);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Returns once the server accepts connections.
  void start();
  void stop();

  int port() const;
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace contentnet::controller
