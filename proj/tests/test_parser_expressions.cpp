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
// Expression-level classification: the sixteen rules, max-matching, and
// penalty-ordered results.

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace nlml;
using nlml_test::classify;

namespace {

std::string best_mood(const std::string& text) {
  auto analyses = classify(text);
  REQUIRE(!analyses.results.empty());
  return analyses.results.front().document.mood();
}

}  // namespace

TEST_CASE("dialog utterances classify to their annotated categories") {
  CHECK(best_mood("I will buy a book tomorrow.") == "statement");
  CHECK(best_mood("Why?") == "circumstances");
  CHECK(best_mood("Because I have got some money.") == "subcircum");
  CHECK(best_mood("Which book will you buy?") == "question");
  CHECK(best_mood("That one you have read.") == "np");
  CHECK(best_mood("What a pity!") == "what terse exclamation");
  CHECK(best_mood("What about this book?") == "about");
  CHECK(best_mood("Terrible!") == "adj");
  CHECK(best_mood("What?") == "np");
  CHECK(best_mood("How terrible that book is!") == "full exclamation");
  CHECK(best_mood("Please tell me why you say that!") == "order");
}

TEST_CASE("rule examples classify as listed") {
  CHECK(best_mood("Please read the book!") == "order");
  CHECK(best_mood("How about this book?") == "about");
  CHECK(best_mood("How terrible!") == "how terse exclamation");
  CHECK(best_mood("Who?") == "np");
  CHECK(best_mood("in the morning.") == "circumstances");
  CHECK(best_mood("at home.") == "circumstances");
  CHECK(best_mood("certainly.") == "circumstances");
  CHECK(best_mood("that book on the desk.") == "np");
  CHECK(best_mood("ill.") == "adj");
}

TEST_CASE("subcircum carries its subordinator") {
  auto analyses = classify("Because I have got some money.");
  REQUIRE(!analyses.results.empty());
  const Document& doc = analyses.results.front().document;
  const Node* sub = doc.find("subordinator");
  REQUIRE(sub != nullptr);
  CHECK(sub->inner_text() == "because");
  CHECK(analyses.results.front().penalty == 12);
}

TEST_CASE("bare-phrase rules carry penalty 10") {
  auto np = classify("that book on the desk.");
  REQUIRE(!np.results.empty());
  CHECK(np.results.front().penalty == 10);
  CHECK(np.results.front().rule == 12);

  auto np_rel = classify("That one you have read.");
  REQUIRE(!np_rel.results.empty());
  CHECK(np_rel.results.front().penalty == 10);
  CHECK(np_rel.results.front().rule == 13);

  auto adj = classify("Terrible!");
  REQUIRE(!adj.results.empty());
  CHECK(adj.results.front().penalty == 10);
}

TEST_CASE("sentence rules carry penalty 0 and outrank phrase readings") {
  auto s = classify("I come.");
  REQUIRE(!s.results.empty());
  CHECK(s.results.front().penalty == 0);
  for (const ParseResult& r : s.results) CHECK(r.document.mood() == "statement");
}

// Max-matching: a successful sentence parse suppresses every phrase-level
// reading.
TEST_CASE("max-matching cut after the sentence moods") {
  for (const char* text : {"I come.", "Please read the book!", "Which book will you buy?",
                           "What a rainy day it is!"}) {
    auto analyses = classify(text);
    REQUIRE(!analyses.results.empty());
    for (const ParseResult& r : analyses.results) {
      std::string mood = r.document.mood();
      INFO(text << " -> " << mood);
      CHECK((mood == "statement" || mood == "question" || mood == "order" ||
             mood == "full exclamation"));
    }
  }
}

TEST_CASE("the progressive reading wins over be+gerund-predicate") {
  auto analyses = classify("I am doing the job.");
  REQUIRE(analyses.results.size() == 1);
  std::string s = serialize(analyses.results.front().document);
  CHECK(s.find("<tense>present progressive</tense>") != std::string::npos);
  CHECK(s.find("<direct_object>") != std::string::npos);
  CHECK(s.find("<predicate_type>clause</predicate_type>") == std::string::npos);
}

TEST_CASE("results are sorted by penalty then probability") {
  // homograph with a lower-probability verb reading
  Lexicon lex = load_lexicon_from_string(
      "book\tbook\tnoun\tnumb=sing;pers=third\t\t0.9\n"
      "book\tbook\tverb\tnumb=sing;pers=first|second;tense=present\ttransitivity=trans\t0.3\n"
      "that\tthat\tdemonstrative\tnumb=sing\n");
  Analyses analyses = classify_expression(tokenize("that book"), lex);
  REQUIRE(!analyses.results.empty());
  for (std::size_t i = 1; i < analyses.results.size(); ++i) {
    const ParseResult& a = analyses.results[i - 1];
    const ParseResult& b = analyses.results[i];
    bool ordered = a.penalty < b.penalty ||
                   (a.penalty == b.penalty && a.probability >= b.probability);
    CHECK(ordered);
  }
}

TEST_CASE("at most eight results are returned") {
  auto analyses = classify("that book on the desk.");
  CHECK(analyses.results.size() <= 8);
}

TEST_CASE("no parse reports the furthest token index") {
  auto analyses = classify("zzzz qqq");
  CHECK(analyses.results.empty());
  CHECK(analyses.furthest <= 1);

  auto partial = classify("I come zzzz");
  CHECK(partial.results.empty());
  CHECK(partial.furthest == 2);
}

TEST_CASE("classify_expression rejects an empty stream") {
  CHECK_THROWS_AS(classify_expression(TokenStream{}, nlml_test::demo_lexicon()), NoParseError);
}

TEST_CASE("every document from the corpus validates cleanly") {
  for (const nlml_test::CorpusRow& row : nlml_test::load_corpus()) {
    auto analyses = classify(row.text);
    INFO(row.text);
    REQUIRE(!analyses.results.empty());
    for (const ParseResult& r : analyses.results) CHECK(validate(r.document).empty());
  }
}

TEST_CASE("identical inputs produce byte-identical ranked results") {
  for (const nlml_test::CorpusRow& row : nlml_test::load_corpus()) {
    auto a = classify(row.text);
    auto b = classify(row.text);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
      CHECK(serialize(a.results[i].document) == serialize(b.results[i].document));
      CHECK(a.results[i].penalty == b.results[i].penalty);
      CHECK(a.results[i].probability == b.results[i].probability);
    }
  }
}

TEST_CASE("the parser terminates on 60-token inputs") {
  std::string text;
  for (int i = 0; i < 60; ++i) text += i % 2 ? " book" : " that";
  auto analyses = classify(text);
  CHECK(analyses.results.size() <= 8);
}
