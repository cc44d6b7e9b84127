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

#include "contentnet/cache/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "contentnet/util/url.hpp"
#include "json.hpp"

namespace contentnet::cache {

namespace {

double wall_now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ContentStore::ContentStore(std::filesystem::path dir,
                           std::uint64_t capacity_bytes)
    : dir_(std::move(dir)), capacity_(capacity_bytes) {
  std::filesystem::create_directories(dir_);
  load_index();
}

void ContentStore::load_index() {
  std::ifstream in(dir_ / "index.json");
  if (!in) return;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    return;  // unreadable index: start empty, bodies get overwritten
  }
  for (const auto& [name, m] : doc.items()) {
    Meta meta;
    meta.file = m.value("file", "");
    meta.length = m.value("length", 0ull);
    meta.origin_ip = m.value("origin_ip", "");
    meta.stored_at_ms = m.value("stored_at_ms", 0.0);
    meta.last_serve = m.value("last_serve", 0ull);
    if (meta.file.empty() || !std::filesystem::exists(dir_ / meta.file))
      continue;
    tick_ = std::max(tick_, meta.last_serve);
    used_ += meta.length;
    entries_.emplace(name, std::move(meta));
  }
}

void ContentStore::save_index_locked() {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, m] : entries_) {
    doc[name] = {{"file", m.file},
                 {"length", m.length},
                 {"origin_ip", m.origin_ip},
                 {"stored_at_ms", m.stored_at_ms},
                 {"last_serve", m.last_serve}};
  }
  std::ofstream out(dir_ / "index.json", std::ios::trunc);
  out << doc.dump(2) << "\n";
}

void ContentStore::evict_for_locked(std::uint64_t incoming) {
  while (used_ + incoming > capacity_ && !entries_.empty()) {
    auto victim = std::min_element(
        entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
          return a.second.last_serve < b.second.last_serve;
        });
    std::error_code ec;
    std::filesystem::remove(dir_ / victim->second.file, ec);
    used_ -= victim->second.length;
    entries_.erase(victim);
  }
}

bool ContentStore::put(const std::string& name, const std::string& body,
                       const std::string& origin_ip) {
  std::lock_guard lk(mu_);
  if (body.size() > capacity_) return false;

  auto old = entries_.find(name);
  if (old != entries_.end()) {
    std::error_code ec;
    std::filesystem::remove(dir_ / old->second.file, ec);
    used_ -= old->second.length;
    entries_.erase(old);
  }
  evict_for_locked(body.size());

  Meta meta;
  meta.file = util::url_encode(name);
  meta.length = body.size();
  meta.origin_ip = origin_ip;
  meta.stored_at_ms = wall_now_ms();
  meta.last_serve = ++tick_;

  std::ofstream out(dir_ / meta.file, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) return false;
  out.close();

  used_ += meta.length;
  entries_.emplace(name, std::move(meta));
  save_index_locked();
  return true;
}

std::optional<CacheEntry> ContentStore::get(const std::string& name) {
  std::lock_guard lk(mu_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;

  std::ifstream in(dir_ / it->second.file, std::ios::binary);
  if (!in) return std::nullopt;
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());

  it->second.last_serve = ++tick_;
  save_index_locked();

  CacheEntry e;
  e.file_name = name;
  e.content_length = body.size();
  e.body = std::move(body);
  e.origin_ip = it->second.origin_ip;
  e.stored_at_ms = it->second.stored_at_ms;
  return e;
}

bool ContentStore::contains(const std::string& name) const {
  std::lock_guard lk(mu_);
  return entries_.count(name) > 0;
}

bool ContentStore::remove(const std::string& name) {
  std::lock_guard lk(mu_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return false;
  std::error_code ec;
  std::filesystem::remove(dir_ / it->second.file, ec);
  used_ -= it->second.length;
  entries_.erase(it);
  save_index_locked();
  return true;
}

std::uint64_t ContentStore::used_bytes() const {
  std::lock_guard lk(mu_);
  return used_;
}

std::size_t ContentStore::object_count() const {
  std::lock_guard lk(mu_);
  return entries_.size();
}

std::vector<std::string> ContentStore::names() const {
  std::lock_guard lk(mu_);
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, meta] : entries_) out.push_back(name);
  return out;
}

}  // namespace contentnet::cache
