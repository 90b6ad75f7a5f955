/*
 * Copyright 2026 The cartelc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CARTELC_TOOLS_MANIFEST_HPP_
#define CARTELC_TOOLS_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cartelc::cli {

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string role;  // "data", "tree", "report-a", ...
  std::string path;
  std::string sha256;
};

/// Record of one invocation: enough to replay it and get the same bytes.
/// Holds only result-affecting settings; execution knobs such as the
/// worker count and wall-clock times are left out so the manifest itself
/// is reproducible.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::string version;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;

  void add_input(const std::string& role, const std::filesystem::path& path);
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace cartelc::cli

#endif  // CARTELC_TOOLS_MANIFEST_HPP_
