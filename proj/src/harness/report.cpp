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

#include "contentnet/harness/report.hpp"

#include <fstream>
#include <sstream>

namespace contentnet::harness {

void Report::finalize() {
  total_requests = requests.size();
  hits = misses = failures = 0;
  double hit_sum = 0, miss_sum = 0;
  for (const auto& r : requests) {
    if (!r.ok) {
      ++failures;
      continue;
    }
    if (r.served_by == "cache") {
      ++hits;
      hit_sum += r.sim_latency_ms;
    } else if (r.served_by == "origin") {
      ++misses;
      miss_sum += r.sim_latency_ms;
    }
  }
  hit_ratio = total_requests == 0
                  ? 0.0
                  : static_cast<double>(hits) /
                        static_cast<double>(total_requests);
  mean_hit_latency_ms = hits == 0 ? 0.0 : hit_sum / static_cast<double>(hits);
  mean_miss_latency_ms =
      misses == 0 ? 0.0 : miss_sum / static_cast<double>(misses);
}

nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["scenario"] = r.scenario_name;
  doc["config"] = r.config_echo;

  auto requests = nlohmann::ordered_json::array();
  for (const auto& q : r.requests) {
    requests.push_back({{"index", q.index},
                        {"file", q.file_name},
                        {"client", q.client},
                        {"offset_ms", q.offset_ms},
                        {"start_vt_ms", q.start_vt_ms},
                        {"end_vt_ms", q.end_vt_ms},
                        {"sim_latency_ms", q.sim_latency_ms},
                        {"proc_wall_us", q.proc_wall_us},
                        {"served_by", q.served_by},
                        {"bytes", q.bytes},
                        {"digest", q.digest},
                        {"ok", q.ok},
                        {"error", q.error}});
  }
  doc["requests"] = std::move(requests);

  doc["aggregates"] = {
      {"total_requests", r.total_requests},
      {"hits", r.hits},
      {"misses", r.misses},
      {"failures", r.failures},
      {"hit_ratio", r.hit_ratio},
      {"mean_hit_latency_ms", r.mean_hit_latency_ms},
      {"mean_miss_latency_ms", r.mean_miss_latency_ms},
      {"origin_requests_per_file", r.origin_requests_per_file}};
  doc["success"] = r.success;
  doc["failure_reason"] = r.failure_reason;
  return doc;
}

Report report_from_json(const nlohmann::json& doc) {
  Report r;
  r.scenario_name = doc.at("scenario").get<std::string>();
  r.config_echo = doc.at("config");
  for (const auto& q : doc.at("requests")) {
    RequestRecord rec;
    rec.index = q.at("index").get<int>();
    rec.file_name = q.at("file").get<std::string>();
    rec.client = q.at("client").get<std::string>();
    rec.offset_ms = q.at("offset_ms").get<double>();
    rec.start_vt_ms = q.at("start_vt_ms").get<double>();
    rec.end_vt_ms = q.at("end_vt_ms").get<double>();
    rec.sim_latency_ms = q.at("sim_latency_ms").get<double>();
    rec.proc_wall_us = q.at("proc_wall_us").get<double>();
    rec.served_by = q.at("served_by").get<std::string>();
    rec.bytes = q.at("bytes").get<std::uint64_t>();
    rec.digest = q.at("digest").get<std::string>();
    rec.ok = q.at("ok").get<bool>();
    rec.error = q.at("error").get<std::string>();
    r.requests.push_back(std::move(rec));
  }
  const auto& agg = doc.at("aggregates");
  r.origin_requests_per_file =
      agg.at("origin_requests_per_file")
          .get<std::map<std::string, std::uint64_t>>();
  r.success = doc.at("success").get<bool>();
  r.failure_reason = doc.at("failure_reason").get<std::string>();
  r.finalize();
  return r;
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "index,file,client,offset_ms,start_vt_ms,end_vt_ms,sim_latency_ms,"
        "proc_wall_us,served_by,bytes,digest,ok\n";
  for (const auto& q : r.requests) {
    os << q.index << ',' << q.file_name << ',' << q.client << ','
       << q.offset_ms << ',' << q.start_vt_ms << ',' << q.end_vt_ms << ','
       << q.sim_latency_ms << ',' << q.proc_wall_us << ',' << q.served_by
       << ',' << q.bytes << ',' << q.digest << ',' << (q.ok ? 1 : 0) << '\n';
  }
  return os.str();
}

void emit_report(const Report& r, const std::filesystem::path& dir,
                 bool with_csv) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write report.json under " +
                               dir.string());
    out << report_to_json(r).dump(2) << "\n";
  }
  if (with_csv) {
    std::ofstream out(dir / "report.csv", std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write report.csv under " +
                               dir.string());
    out << report_to_csv(r);
  }
}

}  // namespace contentnet::harness
