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

#include <string>

#include "contentnet/net/types.hpp"

namespace contentnet::controller {

// Pushes the expect-content hint to a storage element after a fork is
// set up. Best effort: the cache resolves names by pulling the pending
// table either way.
class CacheNotifier {
 public:
  virtual ~CacheNotifier() = default;
  virtual void notify_expect(const net::Endpoint& element,
                             const std::string& file_name,
                             const net::FlowKey& response_flow) = 0;
};

class NullNotifier : public CacheNotifier {
 public:
  void notify_expect(const net::Endpoint&, const std::string&,
                     const net::FlowKey&) override {}
};

// POST /expect-content to the element's serve port.
class HttpCacheNotifier : public CacheNotifier {
 public:
  void notify_expect(const net::Endpoint& element, const std::string& file_name,
                     const net::FlowKey& response_flow) override;
};

}  // namespace contentnet::controller
