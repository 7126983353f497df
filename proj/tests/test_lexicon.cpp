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

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace nlml;

TEST_CASE("load_lexicon parses a verb line") {
  Lexicon lex = load_lexicon_from_string(
      "come\tcome\tverb\tnumb=sing|plur;pers=first|second;tense=present\ttransitivity=intr\t"
      "1.0\n");
  auto entries = lex.lookup("come");
  REQUIRE(entries.size() == 1);
  const LexEntry& e = *entries[0];
  CHECK(e.surface == "come");
  CHECK(e.lemma == "come");
  CHECK(e.category == Category::verb);
  CHECK(e.frame.transitivity == Transitivity::intr);
  CHECK(e.frame.allows(Attachment::intr));
  CHECK(e.affixes.tense == TenseSet::of(Tense::present));
  CHECK(e.probability == 1.0);
}

TEST_CASE("comments and blank lines are skipped") {
  Lexicon lex = load_lexicon_from_string("# nothing here\n\n   \n# more\n");
  CHECK(lex.size() == 0);
}

TEST_CASE("single noun line round trip via lookup") {
  Lexicon lex = load_lexicon_from_string("pity\tpity\tnoun\tnumb=sing;pers=third\n");
  auto hits = lex.lookup("pity");
  REQUIRE(hits.size() == 1);
  // brute-force scan agrees with the index
  int count = 0;
  for (const LexEntry& e : lex.entries())
    if (e.surface == "pity") ++count;
  CHECK(count == 1);
}

TEST_CASE("malformed lines carry line numbers and reasons") {
  CHECK_THROWS_AS(load_lexicon_from_string("justoneword\n"), LexiconError);
  try {
    load_lexicon_from_string("# ok\nword\tword\tnocategory\n");
    FAIL("expected MalformedLine");
  } catch (const LexiconError& e) {
    CHECK(e.kind() == "MalformedLine");
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_lexicon_from_string("word\tword\tnoun\tnumb=banana\n"), LexiconError);
  CHECK_THROWS_AS(load_lexicon_from_string("word\tword\tnoun\tbanana=sing\n"), LexiconError);
  CHECK_THROWS_AS(load_lexicon_from_string("word\tword\tnoun\t\t\t1.5\n"), LexiconError);
  CHECK_THROWS_AS(load_lexicon_from_string("word\tword\tnoun\t\t\t0\n"), LexiconError);
  CHECK_THROWS_AS(load_lexicon_from_string("word\tword\tverb\t\tattachments=banana\n"),
                  LexiconError);
}

TEST_CASE("duplicate (surface, category, affixes) triples are rejected") {
  try {
    load_lexicon_from_string(
        "book\tbook\tnoun\tnumb=sing;pers=third\n"
        "book\tbook\tnoun\tnumb=sing;pers=third\n");
    FAIL("expected DuplicateEntry");
  } catch (const LexiconError& e) {
    CHECK(e.kind() == "DuplicateEntry");
    CHECK(e.line() == 2);
  }
  // same surface with a different category or affixes is a homograph
  Lexicon lex = load_lexicon_from_string(
      "book\tbook\tnoun\tnumb=sing;pers=third\n"
      "book\tbook\tverb\tnumb=sing;pers=first|second;tense=present\ttransitivity=trans\n");
  CHECK(lex.lookup("book").size() == 2);
}

TEST_CASE("lookup is case-folded and returns all homographs") {
  const Lexicon& lex = nlml_test::demo_lexicon();
  CHECK(lex.lookup("zzzz").empty());
  auto i_entries = lex.lookup("I");
  REQUIRE(i_entries.size() == 1);
  CHECK(i_entries[0]->category == Category::perspronoun);
  CHECK(i_entries[0]->affixes.number == NumberSet::of(Number::sing));
  CHECK(i_entries[0]->affixes.person == PersonSet::of(Person::first));
  CHECK(i_entries[0]->affixes.case_ == CaseSet::of(Case::nom));
  CHECK(lex.lookup("The").size() == lex.lookup("the").size());
  // "that" serves as demonstrative; "do" is both auxiliary and main verb
  CHECK_FALSE(lex.lookup("that").empty());
  bool has_modal = false, has_verb = false;
  for (const LexEntry* e : lex.lookup("do")) {
    has_modal = has_modal || e->category == Category::modal;
    has_verb = has_verb || e->category == Category::verb;
  }
  CHECK(has_modal);
  CHECK(has_verb);
}

TEST_CASE("bitransitive frames imply the transitive pattern") {
  const Lexicon& lex = nlml_test::demo_lexicon();
  for (const LexEntry* e : lex.lookup("give")) {
    REQUIRE(e->frame.transitivity == Transitivity::bitrans);
    CHECK(e->frame.allows(Attachment::bitrans));
    CHECK(e->frame.allows(Attachment::trans));
  }
}

TEST_CASE("load_lexicon is deterministic") {
  std::string text = nlml_test::read_file(nlml_test::source_dir() + "/lexicon/en-demo.lex");
  Lexicon a = load_lexicon_from_string(text);
  Lexicon b = load_lexicon_from_string(text);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].surface == b.entries()[i].surface);
    CHECK(a.entries()[i].category == b.entries()[i].category);
    CHECK(a.entries()[i].affixes == b.entries()[i].affixes);
    CHECK(a.entries()[i].probability == b.entries()[i].probability);
  }
}

// Every token of every corpus expression has at least one entry.
TEST_CASE("demo lexicon covers the paper corpus") {
  const Lexicon& lex = nlml_test::demo_lexicon();
  for (const nlml_test::CorpusRow& row : nlml_test::load_corpus()) {
    TokenStream tokens = tokenize(row.text);
    for (const Token& t : tokens.tokens()) {
      if (t.is_punct()) continue;
      INFO(row.text << " :: " << t.text);
      CHECK_FALSE(lex.lookup(t.text).empty());
    }
  }
}

TEST_CASE("missing lexicon file raises a file error") {
  CHECK_THROWS_AS(load_lexicon("/nonexistent/path.lex"), LexiconError);
}
