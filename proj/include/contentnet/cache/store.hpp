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

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace contentnet::cache {

struct CacheEntry {
  std::string file_name;
  std::string body;
  std::uint64_t content_length = 0;
  std::string origin_ip;
  double stored_at_ms = 0;
};

// Disk-backed content objects with an LRU bound on total bytes.
// Bodies live as percent-encoded files under the content directory;
// index.json maps names to metadata and survives restarts.
// Safe for concurrent use.
class ContentStore {
 public:
  ContentStore(std::filesystem::path dir, std::uint64_t capacity_bytes);

  // Evicts least-recently-served entries until the body fits. Returns
  // false when the body alone exceeds capacity (nothing stored).
  bool put(const std::string& name, const std::string& body,
           const std::string& origin_ip);

  // Reads the body back and bumps the entry's last-serve time.
  std::optional<CacheEntry> get(const std::string& name);

  bool contains(const std::string& name) const;
  bool remove(const std::string& name);

  std::uint64_t used_bytes() const;
  std::uint64_t capacity_bytes() const { return capacity_; }
  std::size_t object_count() const;
  std::vector<std::string> names() const;

 private:
  struct Meta {
    std::string file;  // on-disk name (percent-encoded)
    std::uint64_t length = 0;
    std::string origin_ip;
    double stored_at_ms = 0;
    std::uint64_t last_serve = 0;  // logical tick for LRU ordering
  };

  void load_index();
  void save_index_locked();
  void evict_for_locked(std::uint64_t incoming);

  std::filesystem::path dir_;
  std::uint64_t capacity_;
  mutable std::mutex mu_;
  std::map<std::string, Meta> entries_;
  std::uint64_t used_ = 0;
  std::uint64_t tick_ = 0;
};

}  // namespace contentnet::cache
