// Copyright 2026 The VGCL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vgcl/error.hpp"

namespace vgcl::text {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

/// Splits on runs of spaces, tabs and carriage returns.
inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r", start);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    pos = end;
  }
  return fields;
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

inline std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

/// Line-by-line reader over a whole file that reports errors as `path:line: message`.
class LineReader {
 public:
  explicit LineReader(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(path_)) throw Error("missing file " + path_.string());
    contents_ = read_file(path_);
  }

  bool next(std::string_view& line) {
    if (pos_ >= contents_.size()) {
      line = {};
      return false;
    }
    auto end = contents_.find('\n', pos_);
    if (end == std::string::npos) end = contents_.size();
    line = std::string_view(contents_).substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_number_;
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(path_.string() + ":" + std::to_string(line_number_) + ": " + message);
  }

  template <typename T>
  T parse(std::string_view field) const {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      fail("malformed number '" + std::string(field) + "'");
    }
    return value;
  }

 private:
  std::filesystem::path path_;
  std::string contents_;
  std::size_t pos_ = 0;
  std::size_t line_number_ = 0;
};

}  // namespace vgcl::text
