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

#ifndef NLML_AFFIX_HPP
#define NLML_AFFIX_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlml {

// Grammatical feature dimensions. Each feature value of a word is a
// non-empty SET of atoms from one dimension; an unconstrained dimension
// holds the full set. Agreement is set intersection and fails exactly
// when an intersection would become empty.

enum class Number : uint8_t { sing = 0, plur = 1 };
enum class Person : uint8_t { first = 0, second = 1, third = 2 };
enum class Case : uint8_t { nom = 0, dat = 1 };
enum class Tense : uint8_t {
  present = 0,
  past = 1,
  present_progressive = 2,
  past_progressive = 3,
  perfect = 4,
  modal = 5,
  infinitive = 6,
  past_participle = 7,
  present_participle = 8,
};
enum class Grade : uint8_t { absolute = 0, comparative = 1, superlative = 2, predicative = 3 };

inline constexpr int kNumberCount = 2;
inline constexpr int kPersonCount = 3;
inline constexpr int kCaseCount = 2;
inline constexpr int kTenseCount = 9;
inline constexpr int kGradeCount = 4;

// A small bitmask set over one dimension's atoms.
template <typename E, int N>
class AtomSet {
 public:
  constexpr AtomSet() : bits_((1u << N) - 1u) {}  // full set
  constexpr explicit AtomSet(uint16_t bits) : bits_(bits) {}
  constexpr AtomSet(std::initializer_list<E> vals) : bits_(0) {
    for (E v : vals) bits_ |= bit(v);
  }

  static constexpr AtomSet full() { return AtomSet(); }
  static constexpr AtomSet of(E v) { return AtomSet(uint16_t(bit(v))); }

  constexpr bool contains(E v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_full() const { return bits_ == (1u << N) - 1u; }
  constexpr bool single() const { return bits_ != 0 && (bits_ & (bits_ - 1)) == 0; }
  constexpr int size() const {
    int n = 0;
    for (int i = 0; i < N; ++i) n += (bits_ >> i) & 1;
    return n;
  }
  constexpr uint16_t bits() const { return bits_; }

  constexpr AtomSet intersect(AtomSet o) const { return AtomSet(uint16_t(bits_ & o.bits_)); }
  constexpr AtomSet unite(AtomSet o) const { return AtomSet(uint16_t(bits_ | o.bits_)); }

  constexpr bool operator==(const AtomSet&) const = default;

  std::vector<E> values() const {
    std::vector<E> out;
    for (int i = 0; i < N; ++i)
      if (bits_ >> i & 1) out.push_back(static_cast<E>(i));
    return out;
  }

 private:
  static constexpr uint16_t bit(E v) { return uint16_t(1u << static_cast<int>(v)); }
  uint16_t bits_;
};

using NumberSet = AtomSet<Number, kNumberCount>;
using PersonSet = AtomSet<Person, kPersonCount>;
using CaseSet = AtomSet<Case, kCaseCount>;
using TenseSet = AtomSet<Tense, kTenseCount>;
using GradeSet = AtomSet<Grade, kGradeCount>;

inline std::string_view to_string(Number v) {
  switch (v) {
    case Number::sing: return "sing";
    case Number::plur: return "plur";
  }
  return "?";
}

inline std::string_view to_string(Person v) {
  switch (v) {
    case Person::first: return "first";
    case Person::second: return "second";
    case Person::third: return "third";
  }
  return "?";
}

inline std::string_view to_string(Case v) {
  switch (v) {
    case Case::nom: return "nom";
    case Case::dat: return "dat";
  }
  return "?";
}

// The display form of a tense; "infi" is the output spelling of the
// infinitive, as used by the <kernel_tense> tag.
inline std::string_view to_string(Tense v) {
  switch (v) {
    case Tense::present: return "present";
    case Tense::past: return "past";
    case Tense::present_progressive: return "present progressive";
    case Tense::past_progressive: return "past progressive";
    case Tense::perfect: return "perfect";
    case Tense::modal: return "modal";
    case Tense::infinitive: return "infi";
    case Tense::past_participle: return "past participle";
    case Tense::present_participle: return "present participle";
  }
  return "?";
}

inline std::string_view to_string(Grade v) {
  switch (v) {
    case Grade::absolute: return "absolute";
    case Grade::comparative: return "comparative";
    case Grade::superlative: return "superlative";
    case Grade::predicative: return "predicative";
  }
  return "?";
}

template <typename E, int N>
std::string set_text(AtomSet<E, N> s) {
  std::string out;
  for (E v : s.values()) {
    if (!out.empty()) out += '|';
    out += to_string(v);
  }
  return out;
}

// One word's (or one phrase's) feature bundle. Dimensions a category does
// not constrain stay at the full set.
struct AffixValue {
  NumberSet number = NumberSet::full();
  PersonSet person = PersonSet::full();
  CaseSet case_ = CaseSet::full();
  TenseSet tense = TenseSet::full();
  GradeSet grade = GradeSet::full();

  bool operator==(const AffixValue&) const = default;
};

// Componentwise intersection; nullopt when any dimension would become
// empty. The empty set is never a stored state.
inline std::optional<AffixValue> unify(const AffixValue& a, const AffixValue& b) {
  AffixValue r;
  r.number = a.number.intersect(b.number);
  r.person = a.person.intersect(b.person);
  r.case_ = a.case_.intersect(b.case_);
  r.tense = a.tense.intersect(b.tense);
  r.grade = a.grade.intersect(b.grade);
  if (r.number.empty() || r.person.empty() || r.case_.empty() || r.tense.empty() ||
      r.grade.empty())
    return std::nullopt;
  return r;
}

// Name of the first dimension whose intersection is empty, if any.
inline std::optional<std::string> conflict_dimension(const AffixValue& a, const AffixValue& b) {
  if (a.number.intersect(b.number).empty()) return "number";
  if (a.person.intersect(b.person).empty()) return "person";
  if (a.case_.intersect(b.case_).empty()) return "case";
  if (a.tense.intersect(b.tense).empty()) return "tense";
  if (a.grade.intersect(b.grade).empty()) return "grade";
  return std::nullopt;
}

class UnificationFailure : public std::runtime_error {
 public:
  explicit UnificationFailure(std::string dimension)
      : std::runtime_error("unification failure on dimension: " + dimension),
        dimension_(std::move(dimension)) {}
  const std::string& dimension() const { return dimension_; }

 private:
  std::string dimension_;
};

// Throwing variant for callers that treat disagreement as an error.
inline AffixValue unify_or_throw(const AffixValue& a, const AffixValue& b) {
  if (auto r = unify(a, b)) return *r;
  throw UnificationFailure(*conflict_dimension(a, b));
}

}  // namespace nlml

#endif  // NLML_AFFIX_HPP
