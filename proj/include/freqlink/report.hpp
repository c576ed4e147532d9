// Copyright 2026 The freqlink Authors
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

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "freqlink/version.hpp"

namespace freqlink {

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex_u64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Locale-independent float formatting for CSV cells. %.12g keeps the files
/// readable while leaving reruns byte-identical (same bits in, same text out).
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using CsvCell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Header-plus-rows CSV writer: '.' decimal point, no quoting (cells never
/// contain commas here), one trailing newline.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<CsvCell> row) {
    if (row.size() != header_.size()) {
      throw std::invalid_argument("csv row width does not match header");
    }
    rows_.push_back(std::move(row));
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) out += ',';
      out += header_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        std::visit(
            [&out](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                out += fmt_double(v);
              } else if constexpr (std::is_same_v<T, std::string>) {
                out += v;
              } else {
                out += std::to_string(v);
              }
            },
            row[i]);
      }
      out += '\n';
    }
    return out;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

/// Provenance record emitted alongside every output file. Reruns with the
/// same manifest (timestamp aside) reproduce outputs byte-exactly.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  int workers = 1;
  nlohmann::json parameters;

  nlohmann::json to_json() const {
    return nlohmann::json{{"artifact_version", kVersion},
                          {"command", command},
                          {"config_hash", config_hash},
                          {"master_seed", master_seed},
                          {"workers", workers},
                          {"parameters", parameters},
                          {"created_utc", utc_timestamp()}};
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_json().dump(2) << '\n';
  }
};

}  // namespace freqlink
