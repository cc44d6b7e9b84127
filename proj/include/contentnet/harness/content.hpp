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
#include <map>
#include <string>
#include <vector>

namespace contentnet::harness {

struct ManifestEntry {
  std::string name;
  std::uint64_t size_bytes = 0;
  std::uint64_t seed = 0;
};

struct ContentFile {
  std::string body;
  std::string digest;  // sha256 of the body
};

using ContentSet = std::map<std::string, ContentFile>;

// Deterministic pseudo-random bytes: the same (name, seed) always
// yields the same body, on any platform.
std::string generate_body(const std::string& name, std::uint64_t size_bytes,
                          std::uint64_t seed);

// Builds the origin's content set; throws std::invalid_argument on a
// zero-size or duplicate entry.
ContentSet generate_files(const std::vector<ManifestEntry>& manifest);

// Twelve files log-spaced from 2 KB to 6 MB.
std::vector<ManifestEntry> default_manifest();

}  // namespace contentnet::harness
