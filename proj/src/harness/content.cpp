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

#include "contentnet/harness/content.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "contentnet/util/digest.hpp"

namespace contentnet::harness {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string generate_body(const std::string& name, std::uint64_t size_bytes,
                          std::uint64_t seed) {
  // Raw engine output; mt19937_64's sequence is pinned by the standard,
  // unlike the distributions.
  std::mt19937_64 rng(seed ^ fnv1a(name));
  std::string body;
  body.resize(size_bytes);
  std::size_t i = 0;
  while (i < size_bytes) {
    std::uint64_t word = rng();
    for (int b = 0; b < 8 && i < size_bytes; ++b, ++i) {
      body[i] = static_cast<char>((word >> (8 * b)) & 0xff);
    }
  }
  return body;
}

ContentSet generate_files(const std::vector<ManifestEntry>& manifest) {
  ContentSet out;
  for (const auto& entry : manifest) {
    if (entry.name.empty())
      throw std::invalid_argument("manifest entry has an empty name");
    if (entry.size_bytes == 0)
      throw std::invalid_argument("manifest entry " + entry.name +
                                  " has size 0");
    ContentFile file;
    file.body = generate_body(entry.name, entry.size_bytes, entry.seed);
    file.digest = util::sha256_hex(file.body);
    if (!out.emplace(entry.name, std::move(file)).second)
      throw std::invalid_argument("duplicate manifest entry: " + entry.name);
  }
  return out;
}

std::vector<ManifestEntry> default_manifest() {
  constexpr double kMin = 2.0 * 1024;         // 2 KB
  constexpr double kMax = 6.0 * 1024 * 1024;  // 6 MB
  constexpr int kCount = 12;
  std::vector<ManifestEntry> manifest;
  for (int i = 0; i < kCount; ++i) {
    double frac = static_cast<double>(i) / (kCount - 1);
    auto size = static_cast<std::uint64_t>(
        std::llround(kMin * std::pow(kMax / kMin, frac)));
    char name[32];
    std::snprintf(name, sizeof(name), "file%02d.bin", i + 1);
    manifest.push_back({name, size, static_cast<std::uint64_t>(i + 1)});
  }
  return manifest;
}

}  // namespace contentnet::harness
