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

#include "contentnet/controller/api_server.hpp"

#include <spdlog/spdlog.h>

#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace contentnet::controller {

using nlohmann::json;

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  reply_json(res, status, json{{"error", msg}});
}

// Runs a handler body and maps controller errors onto statuses.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const InvalidArgumentError& e) {
    reply_error(res, 400, e.what());
  } catch (const NotFoundError& e) {
    reply_error(res, 404, e.what());
  } catch (const StateError& e) {
    reply_error(res, 409, e.what());
  } catch (const json::exception& e) {
    reply_error(res, 400, std::string("bad request body: ") + e.what());
  } catch (const std::exception& e) {
    spdlog::error("controller api: {}", e.what());
    reply_error(res, 500, e.what());
  }
}

}  // namespace

struct ApiServer::Impl {
  Core& core;
  std::string bind_ip;
  int requested_port;
  int port = 0;
  httplib::Server server;
  std::thread thread;

  Impl(Core& c, std::string ip, int p)
      : core(c), bind_ip(std::move(ip)), requested_port(p) {
    setup_routes();
  }

  void setup_routes() {
    server.Get("/content", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      guarded(res, [&] {
        if (!req.has_param("name"))
          throw InvalidArgumentError("missing query parameter: name");
        auto hit = core.lookup_content(req.get_param_value("name"));
        if (!hit) {
          reply_error(res, 404, "content not cached");
          return;
        }
        reply_json(res, 200, json{{"ip", hit->ip}, {"port", hit->port}});
      });
    });

    server.Post("/metadata", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      guarded(res, [&] {
        auto doc = json::parse(req.body);
        ContentMetadata meta;
        meta.file_name = doc.at("file_name").get<std::string>();
        meta.dst_ip = doc.at("dst_ip").get<std::string>();
        meta.dst_port = doc.at("dst_port").get<std::uint16_t>();
        meta.src_ip = doc.at("src_ip").get<std::string>();
        meta.src_port = doc.at("src_port").get<std::uint16_t>();
        core.report_metadata(meta);
        res.status = 204;
      });
    });

    server.Get("/pending", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      guarded(res, [&] {
        if (!req.has_param("source_ip"))
          throw InvalidArgumentError("missing query parameter: source_ip");
        auto name = core.cache_query(req.get_param_value("source_ip"));
        if (!name) {
          reply_error(res, 404, "nothing pending for this origin");
          return;
        }
        reply_json(res, 200, json{{"file_name", *name}});
      });
    });

    server.Post("/storage/register", [this](const httplib::Request& req,
                                            httplib::Response& res) {
      guarded(res, [&] {
        auto doc = json::parse(req.body);
        StorageCapability cap;
        cap.element_ip = doc.at("ip").get<std::string>();
        cap.element_port = doc.at("port").get<std::uint16_t>();
        cap.capacity_bytes = doc.at("capacity_bytes").get<std::uint64_t>();
        for (const auto& op : doc.value("ops", std::vector<std::string>{})) {
          if (op == "store")
            cap.ops.insert(StorageOp::store);
          else if (op == "serve")
            cap.ops.insert(StorageOp::serve);
          else
            throw InvalidArgumentError("unknown storage op: " + op);
        }
        reply_json(res, 200, json{{"session_id", core.register_storage(cap)}});
      });
    });

    server.Post("/storage/heartbeat", [this](const httplib::Request& req,
                                             httplib::Response& res) {
      guarded(res, [&] {
        auto doc = json::parse(req.body);
        core.heartbeat(doc.at("session_id").get<std::string>());
        res.status = 204;
      });
    });

    server.Post("/storage/stats", [this](const httplib::Request& req,
                                         httplib::Response& res) {
      guarded(res, [&] {
        auto doc = json::parse(req.body);
        core.report_stats(doc.at("session_id").get<std::string>(),
                          doc.at("used_bytes").get<std::uint64_t>(),
                          doc.at("object_count").get<std::uint64_t>());
        res.status = 204;
      });
    });

    server.Post("/storage/confirm", [this](const httplib::Request& req,
                                           httplib::Response& res) {
      guarded(res, [&] {
        auto doc = json::parse(req.body);
        core.confirm_stored(doc.at("session_id").get<std::string>(),
                            doc.at("file_name").get<std::string>());
        res.status = 204;
      });
    });

    server.Delete(R"(/storage/session/(.+))", [this](const httplib::Request& req,
                                                     httplib::Response& res) {
      guarded(res, [&] {
        core.deregister_storage(req.matches[1]);
        res.status = 204;
      });
    });

    server.Get("/admin/state", [this](const httplib::Request&,
                                      httplib::Response& res) {
      guarded(res,
              [&] { res.set_content(core.admin_state().dump(2),
                                    "application/json"); });
    });
  }
};

ApiServer::ApiServer(Core& core, std::string bind_ip, int port)
    : impl_(std::make_unique<Impl>(core, std::move(bind_ip), port)) {}

ApiServer::~ApiServer() { stop(); }

void ApiServer::start() {
  if (impl_->requested_port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->bind_ip.c_str());
    if (impl_->port <= 0)
      throw ControllerError("api server failed to bind an ephemeral port");
  } else {
    if (!impl_->server.bind_to_port(impl_->bind_ip.c_str(),
                                    impl_->requested_port))
      throw ControllerError("api server failed to bind port " +
                            std::to_string(impl_->requested_port));
    impl_->port = impl_->requested_port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  spdlog::info("controller api listening on {}:{}", impl_->bind_ip,
               impl_->port);
}

void ApiServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

int ApiServer::port() const { return impl_->port; }

std::string ApiServer::base_url() const {
  return "http://" + impl_->bind_ip + ":" + std::to_string(impl_->port);
}

}  // namespace contentnet::controller
