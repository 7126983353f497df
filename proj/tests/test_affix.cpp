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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace nlml;

TEST_CASE("unify intersects componentwise") {
  AffixValue a;
  a.number = NumberSet::of(Number::sing);
  AffixValue b;  // unresolved: full sets
  auto r = unify(a, b);
  REQUIRE(r.has_value());
  CHECK(r->number == NumberSet::of(Number::sing));
  CHECK(r->person.is_full());
}

TEST_CASE("unify fails on disjoint person sets") {
  AffixValue a;
  a.number = NumberSet::of(Number::sing);
  a.person = PersonSet::of(Person::first);
  AffixValue b;
  b.number = NumberSet::of(Number::sing);
  b.person = PersonSet::of(Person::third);
  CHECK_FALSE(unify(a, b).has_value());
  CHECK(conflict_dimension(a, b) == std::string("person"));
  CHECK_THROWS_AS(unify_or_throw(a, b), UnificationFailure);
  try {
    unify_or_throw(a, b);
  } catch (const UnificationFailure& e) {
    CHECK(e.dimension() == "person");
  }
}

TEST_CASE("subject of I unifies with come but not comes") {
  const Lexicon& lex = nlml_test::demo_lexicon();
  auto i_entries = lex.lookup("I");
  REQUIRE(i_entries.size() == 1);
  AffixValue subj = i_entries[0]->affixes;

  bool comes_ok = false;
  for (const LexEntry* e : lex.lookup("comes"))
    if (e->category == Category::verb && unify(subj, e->affixes)) comes_ok = true;
  CHECK_FALSE(comes_ok);

  bool come_ok = false;
  for (const LexEntry* e : lex.lookup("come"))
    if (e->category == Category::verb && unify(subj, e->affixes)) come_ok = true;
  CHECK(come_ok);
}

// Set-intersection laws over the finite lattice, exhaustively for the small
// dimensions and sampled for tense.
TEST_CASE("unify is commutative, associative, idempotent") {
  std::vector<PersonSet> person_sets;
  for (uint16_t bits = 1; bits < (1u << kPersonCount); ++bits)
    person_sets.push_back(PersonSet(bits));
  std::vector<GradeSet> grade_sets;
  for (uint16_t bits = 1; bits < (1u << kGradeCount); ++bits)
    grade_sets.push_back(GradeSet(bits));

  auto check_laws = [](auto make) {
    using Set = decltype(make(1));
    std::vector<Set> sets;
    for (uint16_t bits = 1; bits < (1u << 3) - 1; ++bits) sets.push_back(make(bits));
    for (const Set& a : sets) {
      CHECK(a.intersect(a) == a);  // idempotent
      for (const Set& b : sets) {
        CHECK(a.intersect(b) == b.intersect(a));  // commutative
        for (const Set& c : sets)
          CHECK(a.intersect(b).intersect(c) == a.intersect(b.intersect(c)));  // associative
      }
    }
  };
  check_laws([](uint16_t bits) { return PersonSet(bits); });

  // exhaustive over all person x person x person AffixValue triples
  for (const PersonSet& a : person_sets)
    for (const PersonSet& b : person_sets) {
      AffixValue va, vb;
      va.person = a;
      vb.person = b;
      auto ab = unify(va, vb);
      auto ba = unify(vb, va);
      REQUIRE(ab.has_value() == ba.has_value());
      if (ab) CHECK(*ab == *ba);
    }

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> bits(1, (1 << kTenseCount) - 1);
  for (int i = 0; i < 500; ++i) {
    TenseSet a(uint16_t(bits(rng))), b(uint16_t(bits(rng))), c(uint16_t(bits(rng)));
    CHECK(a.intersect(b).intersect(c) == a.intersect(b.intersect(c)));
    CHECK(a.intersect(b) == b.intersect(a));
    CHECK(a.intersect(a) == a);
  }
}

TEST_CASE("set display strings") {
  CHECK(set_text(NumberSet::full()) == "sing|plur");
  CHECK(set_text(NumberSet::of(Number::sing)) == "sing");
  CHECK(set_text(PersonSet::full()) == "first|second|third");
  CHECK(set_text(CaseSet::of(Case::nom)) == "nom");
  CHECK(to_string(Tense::infinitive) == "infi");
  CHECK(to_string(Tense::present_progressive) == "present progressive");
}
