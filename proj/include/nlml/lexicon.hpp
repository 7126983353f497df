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
// The word inventory lives in an editable tab-separated text file:
//
//   surface TAB lemma TAB category TAB affixes TAB frame TAB probability
//
// '#' starts a comment line; blank lines are skipped; the last three
// fields are optional. Affixes read `key=v1|v2;key=...` with keys numb,
// pers, case, tense, grade, advtype. Frames read
// `transitivity=...;particles=...;attachments=...;preps=...`.

#ifndef NLML_LEXICON_HPP
#define NLML_LEXICON_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlml/affix.hpp"

namespace nlml {

enum class Category : uint8_t {
  noun,
  perspronoun,
  query_pronoun,
  query_adverb,
  verb,
  be,
  modal,
  adjective_attr,
  adjective_pred,
  adjective_normal,
  adverb,
  preposition,
  article,
  demonstrative,
  conjunction,
  subordinator,
  number_word,
  particle,
};

inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::noun: return "noun";
    case Category::perspronoun: return "perspronoun";
    case Category::query_pronoun: return "query_pronoun";
    case Category::query_adverb: return "query_adverb";
    case Category::verb: return "verb";
    case Category::be: return "be";
    case Category::modal: return "modal";
    case Category::adjective_attr: return "adjective_attr";
    case Category::adjective_pred: return "adjective_pred";
    case Category::adjective_normal: return "adjective_normal";
    case Category::adverb: return "adverb";
    case Category::preposition: return "preposition";
    case Category::article: return "article";
    case Category::demonstrative: return "demonstrative";
    case Category::conjunction: return "conjunction";
    case Category::subordinator: return "subordinator";
    case Category::number_word: return "number_word";
    case Category::particle: return "particle";
  }
  return "?";
}

inline std::optional<Category> category_from_string(std::string_view s) {
  for (int i = 0; i <= int(Category::particle); ++i) {
    Category c = static_cast<Category>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

enum class Transitivity : uint8_t { intr, trans, bitrans, link };

inline std::string_view to_string(Transitivity t) {
  switch (t) {
    case Transitivity::intr: return "intr";
    case Transitivity::trans: return "trans";
    case Transitivity::bitrans: return "bitrans";
    case Transitivity::link: return "link";
  }
  return "?";
}

// Complement patterns a verb licenses. The first eight are the documented
// inventory; inf_clause extends it for purpose/raising infinitives
// ("go to listen ...", "was seen to do ...").
enum class Attachment : uint8_t {
  intr,
  trans,
  bitrans,
  part_obj,
  part_prep,
  obj_bare_inf,
  obj_pastpart,
  link,
  inf_clause,
};

inline std::string_view to_string(Attachment a) {
  switch (a) {
    case Attachment::intr: return "intr";
    case Attachment::trans: return "trans";
    case Attachment::bitrans: return "bitrans";
    case Attachment::part_obj: return "part_obj";
    case Attachment::part_prep: return "part_prep";
    case Attachment::obj_bare_inf: return "obj_bare_inf";
    case Attachment::obj_pastpart: return "obj_pastpart";
    case Attachment::link: return "link";
    case Attachment::inf_clause: return "inf_clause";
  }
  return "?";
}

inline std::optional<Attachment> attachment_from_string(std::string_view s) {
  for (int i = 0; i <= int(Attachment::inf_clause); ++i) {
    Attachment a = static_cast<Attachment>(i);
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

struct VerbFrame {
  Transitivity transitivity = Transitivity::intr;
  std::set<std::string> particles;      // particles the verb may absorb
  std::set<Attachment> attachments;     // licensed complement patterns
  std::set<std::string> complement_preps;  // prepositions heading a licensed prep complement

  bool allows(Attachment a) const { return attachments.count(a) != 0; }
  bool operator==(const VerbFrame&) const = default;
};

enum class AdvType : uint8_t { time, place, way, degree, reason };

inline std::string_view to_string(AdvType t) {
  switch (t) {
    case AdvType::time: return "time";
    case AdvType::place: return "place";
    case AdvType::way: return "way";
    case AdvType::degree: return "degree";
    case AdvType::reason: return "reason";
  }
  return "?";
}

inline std::optional<AdvType> adv_type_from_string(std::string_view s) {
  for (int i = 0; i <= int(AdvType::reason); ++i) {
    AdvType t = static_cast<AdvType>(i);
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

struct LexEntry {
  std::string surface;   // case-folded token as matched in input
  std::string lemma;
  Category category = Category::noun;
  AffixValue affixes;
  VerbFrame frame;       // meaningful for verb/be/modal only
  std::optional<AdvType> adv_type;  // adverbs and query adverbs
  double probability = 1.0;

  bool has_tense(Tense t) const { return affixes.tense.contains(t); }
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::string kind, int line, std::string reason)
      : std::runtime_error(kind + " (line " + std::to_string(line) + "): " + reason),
        kind_(std::move(kind)),
        line_(line) {}
  const std::string& kind() const { return kind_; }
  int line() const { return line_; }

 private:
  std::string kind_;
  int line_;
};

inline LexiconError malformed_line(int line, std::string reason) {
  return LexiconError("MalformedLine", line, std::move(reason));
}

// Case folding for lookup; ASCII only, which covers the supported fragment.
inline std::string fold(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) out += char(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  return out;
}

class Lexicon {
 public:
  void add(LexEntry entry, int line = 0) {
    for (const LexEntry& e : entries_)
      if (e.surface == entry.surface && e.category == entry.category &&
          e.affixes == entry.affixes)
        throw LexiconError("DuplicateEntry", line,
                           "duplicate (surface, category, affixes) triple: " + entry.surface);
    std::size_t idx = entries_.size();
    entries_.push_back(std::move(entry));
    by_surface_[entries_.back().surface].push_back(idx);
    by_category_[entries_.back().category].push_back(idx);
  }

  // All homographs for a token; empty when unknown (the parser decides
  // what an unknown word means — usually a dead analysis).
  std::vector<const LexEntry*> lookup(std::string_view token) const {
    std::vector<const LexEntry*> out;
    auto it = by_surface_.find(fold(token));
    if (it == by_surface_.end()) return out;
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
    return out;
  }

  std::vector<const LexEntry*> by_category(Category c) const {
    std::vector<const LexEntry*> out;
    auto it = by_category_.find(c);
    if (it == by_category_.end()) return out;
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
    return out;
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<LexEntry>& entries() const { return entries_; }

 private:
  std::vector<LexEntry> entries_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_surface_;
  std::map<Category, std::vector<std::size_t>> by_category_;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename E, int N>
AtomSet<E, N> parse_set(std::string_view text, int line,
                        std::optional<E> (*from)(std::string_view)) {
  AtomSet<E, N> out(uint16_t(0));
  for (const std::string& piece : split(text, '|')) {
    auto v = from(piece);
    if (!v) throw malformed_line(line, "unknown affix value: " + piece);
    out = out.unite(AtomSet<E, N>::of(*v));
  }
  if (out.empty()) throw malformed_line(line, "empty affix value set");
  return out;
}

inline std::optional<Number> number_from(std::string_view s) {
  if (s == "sing") return Number::sing;
  if (s == "plur") return Number::plur;
  return std::nullopt;
}
inline std::optional<Person> person_from(std::string_view s) {
  if (s == "first") return Person::first;
  if (s == "second") return Person::second;
  if (s == "third") return Person::third;
  return std::nullopt;
}
inline std::optional<Case> case_from(std::string_view s) {
  if (s == "nom") return Case::nom;
  if (s == "dat") return Case::dat;
  return std::nullopt;
}
inline std::optional<Tense> tense_from(std::string_view s) {
  if (s == "present") return Tense::present;
  if (s == "past") return Tense::past;
  if (s == "present_progressive") return Tense::present_progressive;
  if (s == "past_progressive") return Tense::past_progressive;
  if (s == "perfect") return Tense::perfect;
  if (s == "modal") return Tense::modal;
  if (s == "infinitive" || s == "infi") return Tense::infinitive;
  if (s == "past_participle") return Tense::past_participle;
  if (s == "present_participle") return Tense::present_participle;
  return std::nullopt;
}
inline std::optional<Grade> grade_from(std::string_view s) {
  if (s == "absolute") return Grade::absolute;
  if (s == "comparative") return Grade::comparative;
  if (s == "superlative") return Grade::superlative;
  if (s == "predicative") return Grade::predicative;
  return std::nullopt;
}

inline void parse_affix_field(std::string_view field, int line, LexEntry& entry) {
  if (trim(field).empty()) return;
  for (const std::string& kv : split(field, ';')) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw malformed_line(line, "affix without '=': " + kv);
    std::string key = trim(kv.substr(0, eq));
    std::string value = trim(kv.substr(eq + 1));
    if (key == "numb")
      entry.affixes.number = parse_set<Number, kNumberCount>(value, line, &number_from);
    else if (key == "pers")
      entry.affixes.person = parse_set<Person, kPersonCount>(value, line, &person_from);
    else if (key == "case")
      entry.affixes.case_ = parse_set<Case, kCaseCount>(value, line, &case_from);
    else if (key == "tense")
      entry.affixes.tense = parse_set<Tense, kTenseCount>(value, line, &tense_from);
    else if (key == "grade")
      entry.affixes.grade = parse_set<Grade, kGradeCount>(value, line, &grade_from);
    else if (key == "advtype") {
      auto t = adv_type_from_string(value);
      if (!t) throw malformed_line(line, "unknown advtype: " + value);
      entry.adv_type = *t;
    } else
      throw malformed_line(line, "unknown affix key: " + key);
  }
}

inline void parse_frame_field(std::string_view field, int line, LexEntry& entry) {
  if (trim(field).empty()) return;
  for (const std::string& kv : split(field, ';')) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw malformed_line(line, "frame without '=': " + kv);
    std::string key = trim(kv.substr(0, eq));
    std::string value = trim(kv.substr(eq + 1));
    if (key == "transitivity") {
      if (value == "intr")
        entry.frame.transitivity = Transitivity::intr;
      else if (value == "trans")
        entry.frame.transitivity = Transitivity::trans;
      else if (value == "bitrans")
        entry.frame.transitivity = Transitivity::bitrans;
      else if (value == "link")
        entry.frame.transitivity = Transitivity::link;
      else
        throw malformed_line(line, "unknown transitivity: " + value);
    } else if (key == "particles") {
      for (const std::string& p : split(value, '|')) entry.frame.particles.insert(p);
    } else if (key == "attachments") {
      for (const std::string& a : split(value, '|')) {
        auto kind = attachment_from_string(a);
        if (!kind) throw malformed_line(line, "unknown attachment kind: " + a);
        entry.frame.attachments.insert(*kind);
      }
    } else if (key == "preps") {
      for (const std::string& p : split(value, '|')) entry.frame.complement_preps.insert(p);
    } else {
      throw malformed_line(line, "unknown frame key: " + key);
    }
  }
}

}  // namespace detail

// Parses one data line of the lexicon file.
inline LexEntry parse_lexicon_line(std::string_view raw, int line) {
  std::vector<std::string> fields = detail::split(raw, '\t');
  if (fields.size() < 3 || fields.size() > 6)
    throw malformed_line(line, "expected 3..6 tab-separated fields, got " +
                                   std::to_string(fields.size()));
  LexEntry entry;
  entry.surface = fold(detail::trim(fields[0]));
  entry.lemma = detail::trim(fields[1]);
  if (entry.surface.empty()) throw malformed_line(line, "empty surface form");
  if (entry.lemma.empty()) entry.lemma = entry.surface;
  auto cat = category_from_string(detail::trim(fields[2]));
  if (!cat) throw malformed_line(line, "unknown category: " + fields[2]);
  entry.category = *cat;
  if (fields.size() > 3) detail::parse_affix_field(fields[3], line, entry);
  if (fields.size() > 4) detail::parse_frame_field(fields[4], line, entry);
  if (fields.size() > 5 && !detail::trim(fields[5]).empty()) {
    std::string p = detail::trim(fields[5]);
    char* end = nullptr;
    double v = std::strtod(p.c_str(), &end);
    if (end != p.c_str() + p.size() || !(v > 0.0) || v > 1.0)
      throw malformed_line(line, "probability out of range (0,1]: " + p);
    entry.probability = v;
  }
  // A bitransitive frame always offers the plain transitive pattern too.
  if (entry.frame.transitivity == Transitivity::bitrans) {
    entry.frame.attachments.insert(Attachment::bitrans);
    entry.frame.attachments.insert(Attachment::trans);
  }
  if (entry.frame.attachments.empty() &&
      (entry.category == Category::verb || entry.category == Category::be ||
       entry.category == Category::modal)) {
    switch (entry.frame.transitivity) {
      case Transitivity::intr: entry.frame.attachments.insert(Attachment::intr); break;
      case Transitivity::trans: entry.frame.attachments.insert(Attachment::trans); break;
      case Transitivity::bitrans: break;  // handled above
      case Transitivity::link: entry.frame.attachments.insert(Attachment::link); break;
    }
  }
  return entry;
}

inline Lexicon load_lexicon_from_stream(std::istream& in) {
  Lexicon lex;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string t = detail::trim(raw);
    if (t.empty() || t[0] == '#') continue;
    lex.add(parse_lexicon_line(raw, line), line);
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError("FileError", 0, "cannot open lexicon file: " + path);
  return load_lexicon_from_stream(in);
}

inline Lexicon load_lexicon_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_lexicon_from_stream(in);
}

}  // namespace nlml

#endif  // NLML_LEXICON_HPP
