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
#include <string>

#include "contentnet/harness/report.hpp"
#include "contentnet/harness/scenario.hpp"

namespace contentnet::harness {

// Assembles fabric + controller + proxy + cache + scripted client and
// origin, executes the request script in scripted order and produces
// the hit/miss report. Requests run serially; virtual time models the
// link latencies, wall time is measured separately.
class ScenarioRunner {
 public:
  // `work_dir` holds cache state; empty means a fresh temp directory
  // that is removed again afterwards.
  explicit ScenarioRunner(Scenario scenario,
                          std::filesystem::path work_dir = {});
  ~ScenarioRunner();

  Report run();

  // Canonical delivery-trace dump; valid after run().
  const std::string& trace_text() const { return trace_text_; }

 private:
  Scenario scenario_;
  std::filesystem::path work_dir_;
  bool own_work_dir_ = false;
  std::string trace_text_;
};

}  // namespace contentnet::harness
