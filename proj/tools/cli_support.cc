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

#include "cli_support.h"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "segmix/errors.h"

namespace segmix::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw UsageError("not a number: '" + text + "'");
  return value;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_number<double>(s));
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(text)) out.push_back(parse_number<std::size_t>(s));
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split_list(text)) out.push_back(parse_number<std::uint64_t>(s));
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find(' ') != std::string::npos) {
      throw ParseError(line_no, "bad key '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

Manifest::Manifest(std::string command, std::vector<std::string> argv) {
  doc_["format"] = "segmix-manifest";
  doc_["version"] = 1;
  doc_["command"] = std::move(command);
  doc_["argv"] = std::move(argv);
  doc_["config"] = nlohmann::json::object();
  doc_["seeds"] = nlohmann::json::object();
  doc_["inputs"] = nlohmann::json::object();
  doc_["outputs"] = nlohmann::json::object();
  doc_["timings"] = nlohmann::json::object();
}

void Manifest::set_config(const std::map<std::string, std::string>& config) {
  doc_["config"] = config;
}

void Manifest::set_seed(const std::string& name, std::uint64_t value) {
  doc_["seeds"][name] = value;
}

void Manifest::add_input(const std::string& role, const std::filesystem::path& path) {
  doc_["inputs"][role] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void Manifest::add_output(const std::string& role, const std::filesystem::path& path) {
  doc_["outputs"][role] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void Manifest::set_timing(const std::string& name, double seconds) {
  doc_["timings"][name] = seconds;
}

void Manifest::set_note(const std::string& key, nlohmann::json value) {
  doc_[key] = std::move(value);
}

void Manifest::write(const std::filesystem::path& path) const {
  write_text_file(path, doc_.dump(2) + "\n");
}

nlohmann::json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (doc.value("format", "") != "segmix-manifest") {
    throw DataError(path.string() + ": not a segmix manifest");
  }
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace segmix::cli
