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

#include "contentnet/harness/runner.hpp"

#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <thread>

#include "contentnet/cache/http_response.hpp"
#include "contentnet/cache/service.hpp"
#include "contentnet/cache/store.hpp"
#include "contentnet/controller/api_server.hpp"
#include "contentnet/controller/core.hpp"
#include "contentnet/harness/origin_server.hpp"
#include "contentnet/harness/simnet.hpp"
#include "contentnet/net/socket.hpp"
#include "contentnet/proxy/proxy.hpp"
#include "contentnet/util/digest.hpp"
#include "contentnet/util/url.hpp"

namespace contentnet::harness {

namespace {

std::filesystem::path fresh_temp_dir() {
  static std::atomic<std::uint64_t> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("contentnet-run-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

// A loopback port that nothing listens on, so clients see a refused
// connection rather than a hang.
std::string dead_controller_url() {
  net::TcpListener probe("127.0.0.1", 0);
  int port = probe.port();
  probe.stop();
  return "http://127.0.0.1:" + std::to_string(port);
}

// Delivers expect-content notifications straight into the in-process
// cache services.
class DirectNotifier : public controller::CacheNotifier {
 public:
  void bind(const net::Endpoint& element, cache::CacheService* svc) {
    targets_[element] = svc;
  }
  void notify_expect(const net::Endpoint& element, const std::string& name,
                     const net::FlowKey& flow) override {
    auto it = targets_.find(element);
    if (it != targets_.end()) it->second->handle_expect(name, flow);
  }

 private:
  std::map<net::Endpoint, cache::CacheService*> targets_;
};

struct CacheRig {
  std::unique_ptr<controller::HttpClient> client;
  std::unique_ptr<cache::ContentStore> store;
  std::unique_ptr<cache::CacheService> service;
  std::string session_id;

  std::thread heartbeat_thread;
  std::mutex hb_mu;
  std::condition_variable hb_cv;
  bool hb_stop = false;

  void start_heartbeats(double interval_ms) {
    heartbeat_thread = std::thread([this, interval_ms] {
      std::unique_lock lk(hb_mu);
      while (!hb_cv.wait_for(lk, std::chrono::duration<double, std::milli>(
                                     interval_ms),
                             [this] { return hb_stop; })) {
        lk.unlock();
        try {
          client->heartbeat(session_id);
        } catch (const std::exception&) {
          // controller gone; keep trying until told to stop
        }
        lk.lock();
      }
    });
  }

  void stop_heartbeats() {
    {
      std::lock_guard lk(hb_mu);
      hb_stop = true;
    }
    hb_cv.notify_all();
    if (heartbeat_thread.joinable()) heartbeat_thread.join();
  }
};

}  // namespace

ScenarioRunner::ScenarioRunner(Scenario scenario,
                               std::filesystem::path work_dir)
    : scenario_(std::move(scenario)), work_dir_(std::move(work_dir)) {
  if (work_dir_.empty()) {
    work_dir_ = fresh_temp_dir();
    own_work_dir_ = true;
  } else {
    std::filesystem::create_directories(work_dir_);
  }
}

ScenarioRunner::~ScenarioRunner() {
  if (own_work_dir_) {
    std::error_code ec;
    std::filesystem::remove_all(work_dir_, ec);
  }
}

Report ScenarioRunner::run() {
  validate_scenario(scenario_);
  const ScenarioConfig& cfg = scenario_.config;

  ContentSet content = generate_files(scenario_.manifest);

  fabric::SharedNetwork fabric(
      fabric::Network(scenario_.topology(), cfg.mtu_payload));

  controller::CoreConfig ccfg;
  ccfg.addresses = cfg.addresses;
  ccfg.proxy_host = cfg.proxy_host;
  ccfg.proxy_port = cfg.proxy_port;
  ccfg.http_port = cfg.origin_port;
  ccfg.pending_ttl_ms = cfg.pending_ttl_ms;
  ccfg.heartbeat_interval_ms = cfg.heartbeat_interval_ms;
  ccfg.missed_heartbeats = cfg.missed_heartbeats;
  ccfg.caching_enabled = cfg.caching_enabled;

  controller::SteadyClock clock;
  DirectNotifier notifier;
  controller::Core core(ccfg, fabric, clock, notifier);

  // Bootstrap rules always go in; with the controller "stopped" they
  // model static flows that outlive it.
  core.install_default_routes();
  {
    fabric::Topology topo = scenario_.topology();
    std::set<std::string> client_switches;
    for (const auto& r : scenario_.script)
      client_switches.insert(topo.host_switch(r.client));
    for (const auto& sw : client_switches)
      core.install_nat_rules(sw, cfg.proxy_host);
  }

  std::optional<controller::ApiServer> api;
  std::string api_url;
  if (cfg.controller_enabled) {
    api.emplace(core);
    api->start();
    api_url = api->base_url();
  } else {
    api_url = dead_controller_url();
  }

  SimNet sim(fabric, cfg.addresses);

  // Caches: capture tap + serve endpoint + registration/heartbeats.
  std::vector<std::unique_ptr<CacheRig>> rigs;
  for (const auto& host : cfg.cache_hosts) {
    auto rig = std::make_unique<CacheRig>();
    rig->client = std::make_unique<controller::HttpClient>(api_url);
    rig->store = std::make_unique<cache::ContentStore>(
        work_dir_ / ("cache-" + host), cfg.cache_capacity_bytes);
    rig->service =
        std::make_unique<cache::CacheService>(*rig->store, *rig->client);

    const std::string& ip = sim.ip_of(host);
    notifier.bind({ip, cfg.cache_port}, rig->service.get());

    if (cfg.controller_enabled) {
      controller::StorageCapability cap;
      cap.element_ip = ip;
      cap.element_port = cfg.cache_port;
      cap.capacity_bytes = cfg.cache_capacity_bytes;
      cap.ops = {controller::StorageOp::store, controller::StorageOp::serve};
      rig->session_id = rig->client->register_storage(cap);
      rig->service->set_session_id(rig->session_id);
      rig->start_heartbeats(cfg.heartbeat_interval_ms);
    }

    cache::CacheService* svc = rig->service.get();
    sim.listen(host, cfg.cache_port,
               [svc](net::StreamPtr s) { svc->handle_stream(*s); });
    sim.set_capture_tap(host, [svc](const fabric::Packet& pkt, double) {
      svc->ingest(cache::TcpSegment{pkt.flow, pkt.seq, pkt.payload,
                                    pkt.flags.fin});
    });
    rigs.push_back(std::move(rig));
  }

  OriginServer origin(content);
  sim.listen(cfg.origin_host, cfg.origin_port,
             [&origin](net::StreamPtr s) { origin.handle_stream(*s); });

  controller::HttpClient proxy_ctrl(api_url);
  proxy::ProxyService proxy_svc(proxy_ctrl,
                                proxy::ProxyService::Options{cfg.index_name});

  std::mutex decision_mu;
  std::optional<proxy::ProxyDecision::Kind> last_decision;
  proxy_svc.set_decision_hook(
      [&](const proxy::ParsedRequest&, const proxy::ProxyDecision& d) {
        std::lock_guard lk(decision_mu);
        last_decision = d.kind;
      });
  sim.listen(cfg.proxy_host, cfg.proxy_port, [&](net::StreamPtr s) {
    auto* stream = static_cast<SimStream*>(s.get());
    SimNet::BoundDialer dialer(sim, cfg.proxy_host, stream->clock());
    proxy_svc.handle_connection(std::move(s), dialer);
  });

  // Scripted requests, serialized in (time offset, script order).
  std::vector<ScriptEntry> script = scenario_.script;
  std::stable_sort(script.begin(), script.end(),
                   [](const ScriptEntry& a, const ScriptEntry& b) {
                     return a.at_ms < b.at_ms;
                   });

  Report report;
  report.scenario_name = scenario_.name;
  report.config_echo = scenario_to_json(scenario_);

  const std::string& origin_ip = sim.ip_of(cfg.origin_host);
  auto cache_serves = [&] {
    std::uint64_t total = 0;
    for (const auto& rig : rigs) total += rig->service->serves();
    return total;
  };

  int index = 0;
  for (const auto& entry : script) {
    RequestRecord rec;
    rec.index = index++;
    rec.file_name = entry.file;
    rec.client = entry.client;
    rec.offset_ms = entry.at_ms;
    rec.start_vt_ms = entry.at_ms;

    std::uint64_t origin_before = origin.requests_for(entry.file);
    std::uint64_t serves_before = cache_serves();
    {
      std::lock_guard lk(decision_mu);
      last_decision.reset();
    }

    auto vclock = std::make_shared<VClock>(entry.at_ms);
    auto wall_start = std::chrono::steady_clock::now();
    try {
      auto conn =
          sim.connect(entry.client, {origin_ip, cfg.origin_port}, vclock);
      conn->write_all("GET /" + util::url_encode(entry.file) +
                      " HTTP/1.1\r\nHost: " + origin_ip +
                      "\r\nConnection: close\r\n\r\n");
      std::string raw = conn->read_to_end();
      conn->close();

      auto res = cache::extract_body(raw);
      if (!res.ok()) {
        rec.error = "unparseable response (extract status " +
                    std::to_string(static_cast<int>(res.status)) + ")";
      } else if (res.http_status != 200) {
        rec.error = "http status " + std::to_string(res.http_status);
      } else {
        rec.bytes = res.body.size();
        rec.digest = util::sha256_hex(res.body);
        const ContentFile& expected = content.at(entry.file);
        if (rec.digest != expected.digest)
          rec.error = "digest mismatch against manifest";
        else
          rec.ok = true;
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    rec.proc_wall_us = std::chrono::duration<double, std::micro>(
                           std::chrono::steady_clock::now() - wall_start)
                           .count();
    rec.end_vt_ms = vclock->now();
    rec.sim_latency_ms = rec.end_vt_ms - rec.start_vt_ms;

    bool served_from_cache = cache_serves() > serves_before;
    bool served_from_origin = origin.requests_for(entry.file) > origin_before;
    rec.served_by = served_from_cache   ? "cache"
                    : served_from_origin ? "origin"
                                         : "none";
    {
      std::lock_guard lk(decision_mu);
      if (rec.ok && last_decision) {
        bool consistent =
            (*last_decision == proxy::ProxyDecision::Kind::redirect &&
             served_from_cache) ||
            (*last_decision == proxy::ProxyDecision::Kind::passthrough &&
             served_from_origin);
        if (!consistent) {
          rec.ok = false;
          rec.error = "served_by disagrees with the proxy decision";
        }
      }
    }

    spdlog::debug("harness: [{}] {} -> {} ({} bytes, {} ms simulated)",
                  rec.index, rec.file_name, rec.served_by, rec.bytes,
                  rec.sim_latency_ms);
    report.requests.push_back(std::move(rec));
  }

  // Teardown: heartbeats first, then sessions, then the API.
  for (auto& rig : rigs) rig->stop_heartbeats();
  if (cfg.controller_enabled) {
    for (auto& rig : rigs) {
      try {
        rig->client->deregister(rig->session_id);
      } catch (const std::exception&) {
      }
    }
  }
  if (api) api->stop();
  sim.shutdown();
  trace_text_ = sim.trace_log().canonical_text();

  report.origin_requests_per_file = origin.request_counts();
  report.finalize();
  report.success = true;
  for (const auto& r : report.requests) {
    if (!r.ok) {
      report.success = false;
      report.failure_reason = "request " + std::to_string(r.index) + " (" +
                              r.file_name + "): " + r.error;
      break;
    }
  }
  return report;
}

}  // namespace contentnet::harness
