// Copyright 2026 The NLML Authors.
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
//
// Classified persistence of NLML strings: one record per line,
// `key TAB class TAB ISO-8601 timestamp TAB nlml`. Canonical NLML contains
// no tabs or newlines, so the format is unambiguous and byte-exact.

#ifndef NLML_STORE_HPP
#define NLML_STORE_HPP

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/file.h>
#include <unistd.h>
#define NLML_STORE_HAS_FLOCK 1
#endif

#include "nlml/markup.hpp"
#include "nlml/model.hpp"
#include "nlml/parser.hpp"

namespace nlml {

enum class DbClass : uint8_t { fact, question, relation };

inline std::string_view to_string(DbClass c) {
  switch (c) {
    case DbClass::fact: return "fact";
    case DbClass::question: return "question";
    case DbClass::relation: return "relation";
  }
  return "?";
}

inline std::optional<DbClass> db_class_from_string(std::string_view s) {
  if (s == "fact") return DbClass::fact;
  if (s == "question") return DbClass::question;
  if (s == "relation") return DbClass::relation;
  return std::nullopt;
}

struct DbRecord {
  std::uint64_t key = 0;
  DbClass db_class = DbClass::fact;
  std::string created_at;  // ISO-8601 UTC
  std::string nlml;        // canonical NLML string

  bool operator==(const DbRecord&) const = default;
};

class StoreError : public std::runtime_error {
 public:
  StoreError(std::string kind, std::string detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline StoreError key_not_found(std::uint64_t key) {
  return StoreError("KeyNotFound", "no record with key " + std::to_string(key));
}
inline StoreError unclassifiable(std::string_view mood) {
  return StoreError("Unclassifiable", "mood '" + std::string(mood) + "' has no storage class");
}
inline StoreError storage_failure(std::string_view reason) {
  return StoreError("StorageFailure", std::string(reason));
}

// Classification is a function of mood, complexity, and subordinator
// presence only: questions file as questions, subordinated statements as
// relations, everything else (simple and compound statements, orders,
// exclamations) as facts.
inline DbClass classify(const Document& doc) {
  std::string mood_text = doc.mood();
  auto mood = mood_from_string(mood_text);
  if (!mood) throw unclassifiable(mood_text);
  switch (*mood) {
    case Mood::question: return DbClass::question;
    case Mood::subcircum: return DbClass::relation;
    case Mood::statement:
    case Mood::order:
    case Mood::full_exclamation: break;
    default: throw unclassifiable(mood_text);
  }
  const Node* cx = doc.find("complexity");
  bool subordinated = doc.find("subordinator") != nullptr;
  if (cx && subordinated) {
    std::string c = cx->inner_text();
    if (*mood == Mood::statement && (c == "complex" || c == "compound complex"))
      return DbClass::relation;
  }
  return DbClass::fact;
}

inline std::string iso8601_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
#if defined(_WIN32)
  gmtime_s(&tm, &t);
#else
  gmtime_r(&t, &tm);
#endif
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

// Single-writer, multi-reader flat-file store. Records load once at open;
// writes append to the file under an advisory lock and to the in-memory
// index. Keys are assigned monotonically.
class Store {
 public:
  explicit Store(std::string path) : path_(std::move(path)) { load(); }

  std::uint64_t put(const Document& doc) {
    DbClass cls = classify(doc);
    DbRecord rec;
    rec.key = next_key_++;
    rec.db_class = cls;
    rec.created_at = iso8601_now();
    rec.nlml = serialize(canonicalize(doc));
    append_line(rec);
    records_[rec.key] = rec;
    return rec.key;
  }

  DbRecord get(std::uint64_t key) const {
    auto it = records_.find(key);
    if (it == records_.end()) throw key_not_found(key);
    return it->second;
  }

  std::vector<DbRecord> query(DbClass cls) const {
    std::vector<DbRecord> out;
    for (const auto& [key, rec] : records_)
      if (rec.db_class == cls) out.push_back(rec);
    return out;
  }

  std::vector<DbRecord> all() const {
    std::vector<DbRecord> out;
    for (const auto& [key, rec] : records_) out.push_back(rec);
    return out;
  }

  // Deserializes and rebuilds object graphs; a record that fails to
  // deserialize signals store corruption and propagates.
  std::vector<SentenceModel> rebuild(const std::vector<std::uint64_t>& keys) const {
    std::vector<SentenceModel> out;
    out.reserve(keys.size());
    for (std::uint64_t key : keys) {
      DbRecord rec = get(key);
      out.push_back(build_model(deserialize(rec.nlml)));
    }
    return out;
  }

  std::size_t size() const { return records_.size(); }
  const std::string& path() const { return path_; }

 private:
  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;  // a missing store file is an empty store
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      DbRecord rec;
      std::size_t a = line.find('\t');
      std::size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
      std::size_t c = b == std::string::npos ? b : line.find('\t', b + 1);
      if (c == std::string::npos)
        throw storage_failure("malformed record at line " + std::to_string(line_no));
      rec.key = std::strtoull(line.substr(0, a).c_str(), nullptr, 10);
      auto cls = db_class_from_string(line.substr(a + 1, b - a - 1));
      if (!cls) throw storage_failure("unknown class at line " + std::to_string(line_no));
      rec.db_class = *cls;
      rec.created_at = line.substr(b + 1, c - b - 1);
      rec.nlml = line.substr(c + 1);
      records_[rec.key] = rec;
      next_key_ = std::max(next_key_, rec.key + 1);
    }
  }

  void append_line(const DbRecord& rec) {
    std::FILE* f = std::fopen(path_.c_str(), "ab");
    if (!f) throw storage_failure("cannot open store file: " + path_);
#ifdef NLML_STORE_HAS_FLOCK
    if (flock(fileno(f), LOCK_EX) != 0) {
      std::fclose(f);
      throw storage_failure("cannot lock store file: " + path_);
    }
#endif
    std::string line = std::to_string(rec.key);
    line += '\t';
    line += to_string(rec.db_class);
    line += '\t';
    line += rec.created_at;
    line += '\t';
    line += rec.nlml;
    line += '\n';
    std::size_t written = std::fwrite(line.data(), 1, line.size(), f);
    bool ok = written == line.size() && std::fflush(f) == 0;
#ifdef NLML_STORE_HAS_FLOCK
    flock(fileno(f), LOCK_UN);
#endif
    std::fclose(f);
    if (!ok) throw storage_failure("short write to store file: " + path_);
  }

  std::string path_;
  std::map<std::uint64_t, DbRecord> records_;
  std::uint64_t next_key_ = 1;
};

}  // namespace nlml

#endif  // NLML_STORE_HPP
