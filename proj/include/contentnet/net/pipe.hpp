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

#include <condition_variable>
#include <deque>
#include <mutex>
#include <utility>

#include "contentnet/net/stream.hpp"

namespace contentnet::net {

// In-memory connected stream pair; both ends are thread safe.
std::pair<StreamPtr, StreamPtr> make_pipe(Endpoint a_end = {"pipe-a", 1},
                                          Endpoint b_end = {"pipe-b", 2});

}  // namespace contentnet::net
