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

#include <atomic>
#include <chrono>

namespace contentnet::controller {

// Injectable time source so expiry behavior is testable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_ms() const = 0;
};

class SteadyClock : public Clock {
 public:
  double now_ms() const override {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
};

class ManualClock : public Clock {
 public:
  explicit ManualClock(double start_ms = 0) : t_(start_ms) {}
  double now_ms() const override { return t_.load(); }
  void advance_ms(double delta) { t_ = t_.load() + delta; }
  void set_ms(double t) { t_ = t; }

 private:
  std::atomic<double> t_;
};

}  // namespace contentnet::controller
