// Copyright 2026 The SegMix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEGMIX_TOOLS_CLI_SUPPORT_H_
#define SEGMIX_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace segmix::cli {

// Bad flag combinations; mapped to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::vector<double> parse_doubles(const std::string& text);
std::vector<std::size_t> parse_sizes(const std::string& text);
std::vector<std::uint64_t> parse_seeds(const std::string& text);

// Flat "key = value" lines; '#' starts a comment. Keys are long option names
// without the leading dashes. Throws ParseError with the offending line.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Run record written next to every artifact-producing command.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void set_config(const std::map<std::string, std::string>& config);
  void set_seed(const std::string& name, std::uint64_t value);
  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::string& role, const std::filesystem::path& path);
  void set_timing(const std::string& name, double seconds);
  void set_note(const std::string& key, nlohmann::json value);

  const nlohmann::json& json() const { return doc_; }
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json doc_;
};

nlohmann::json read_manifest(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace segmix::cli

#endif  // SEGMIX_TOOLS_CLI_SUPPORT_H_
