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
// Sentence-level decomposition: complexity ladder, connectors,
// subordinate clauses, agreement, voice, and the golden listings.

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace nlml;
using nlml_test::demo_lexicon;
using nlml_test::parse_best;

namespace {

std::string parse_to_string(const std::string& text) { return serialize(parse_best(text)); }

int count_occurrences(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (std::size_t at = haystack.find(needle); at != std::string::npos;
       at = haystack.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("golden: I come") {
  CHECK(parse_to_string("I come") == nlml_test::read_fixture("golden_i_come.nlml"));
}

TEST_CASE("golden: compound complex listing") {
  CHECK(parse_to_string("If it rains today, you will not go, and I will not come.") ==
        nlml_test::read_fixture("golden_compound_complex.nlml"));
}

TEST_CASE("golden: there-be sentence") {
  std::string s = parse_to_string("There is a book on the desk.");
  CHECK(s == nlml_test::read_fixture("golden_there_be.nlml"));
  CHECK(s.find("<subject><noun><word>there</word></noun></subject>") != std::string::npos);
  CHECK(s.find("<predicate_type>np</predicate_type>") != std::string::npos);
  CHECK(s.find("<circum_type>prep</circum_type>") != std::string::npos);
}

TEST_CASE("statement ladder picks the highest complexity that fits") {
  CHECK(parse_statement(tokenize("I come ."), demo_lexicon())
            .document.find("complexity")
            ->inner_text() == "simple");
  CHECK(parse_statement(tokenize("It snows , but I still go out ."), demo_lexicon())
            .document.find("complexity")
            ->inner_text() == "compound");
  CHECK(parse_statement(tokenize("If you come , I will go ."), demo_lexicon())
            .document.find("complexity")
            ->inner_text() == "complex");
}

TEST_CASE("compound statements carry parts and a connector") {
  std::string s = parse_to_string("Today you come, he goes, and I wait.");
  CHECK(count_occurrences(s, "<simple_sentence>") == 3);
  CHECK(s.find("<sentence_connector>and</sentence_connector>") != std::string::npos);
  // pre-circumstance attaches to the first part
  CHECK(s.find("<simple_sentence><circum>") != std::string::npos);

  std::string but = parse_to_string("It snows, but I still go out.");
  CHECK(count_occurrences(but, "<simple_sentence>") == 2);
  CHECK(but.find("<sentence_connector>but</sentence_connector>") != std::string::npos);
}

TEST_CASE("two-word connectors are split and distributed") {
  std::string neither = parse_to_string("Neither you come, nor do I go.");
  CHECK(neither.find("<sentence_connector>neither_nor</sentence_connector>") !=
        std::string::npos);
  CHECK(count_occurrences(neither, "<simple_sentence>") == 2);

  std::string either = parse_to_string("Either live or die!");
  CHECK(either.find("<mood>order</mood>") != std::string::npos);
  CHECK(either.find("<sentence_connector>either_or</sentence_connector>") != std::string::npos);
}

TEST_CASE("complex statements carry subordinator and sub clause") {
  std::string s = parse_to_string("I lived whenever she lived.");
  CHECK(s.find("<complexity>complex</complexity>") != std::string::npos);
  CHECK(s.find("<subordinator>whenever</subordinator>") != std::string::npos);
  REQUIRE(s.find("<sub>") != std::string::npos);
  // trailing subordinate clause serializes after the main clause
  CHECK(s.find("<verb_phrase>") < s.find("<subordinator>"));

  std::string lead = parse_to_string("If you come, I will go.");
  CHECK(lead.find("<subordinator>if</subordinator>") != std::string::npos);
  CHECK(lead.find("<subordinator>") < lead.find("<sub>"));
}

TEST_CASE("compound complex is a subordinate clause plus an and-or list") {
  std::string s = parse_to_string(
      "If it rains today, the desk should be moved into the room, and the window should be "
      "closed.");
  CHECK(s.find("<complexity>compound complex</complexity>") != std::string::npos);
  CHECK(count_occurrences(s, "<complete_sentence>") == 2);
  CHECK(s.find("<subordinator>if</subordinator>") != std::string::npos);
  CHECK(s.find("<voice>passive</voice>") != std::string::npos);
}

TEST_CASE("questions decompose into compound, complex, simple") {
  std::string compound = parse_to_string("What should I do, what can I do, and what must I do?");
  CHECK(compound.find("<mood>question</mood>") != std::string::npos);
  CHECK(compound.find("<complexity>compound</complexity>") != std::string::npos);
  CHECK(count_occurrences(compound, "<simple_sentence>") == 3);

  std::string complex_q = parse_to_string("What would he do if it rains today?");
  CHECK(complex_q.find("<complexity>complex</complexity>") != std::string::npos);
  CHECK(complex_q.find("<subordinator>if</subordinator>") != std::string::npos);

  std::string simple_q = parse_to_string("Which book will you buy?");
  CHECK(simple_q.find("<complexity>simple</complexity>") != std::string::npos);
  CHECK(simple_q.find("<direct_object>") != std::string::npos);
}

TEST_CASE("wh-subject questions keep the query phrase as subject") {
  std::string s = parse_to_string("Who is coming to fetch the book?");
  CHECK(s.find("<subject><noun><type>querypronoun</type><word>who</word>") !=
        std::string::npos);
  CHECK(s.find("<tense>present progressive</tense>") != std::string::npos);
  CHECK(s.find("<noun_clause>") != std::string::npos);
}

TEST_CASE("orders hide their subject") {
  std::string s = parse_to_string("Please read the book!");
  CHECK(s.find("<mood>order</mood>") != std::string::npos);
  CHECK(s.find("<subject>") == std::string::npos);
  CHECK(s.find("please") == std::string::npos);  // politeness marker is not emitted

  std::string go = parse_to_string("Go to listen to the radio!");
  CHECK(go.find("<subject>") == std::string::npos);
  CHECK(go.find("<noun_clause>") != std::string::npos);
  CHECK(go.find("<verb_word>to listen</verb_word>") != std::string::npos);
}

TEST_CASE("order decomposition mirrors statements") {
  std::string cc = parse_to_string(
      "If it rains today, please stay at home, listen to the radio and read the book!");
  CHECK(cc.find("<complexity>compound complex</complexity>") != std::string::npos);
  CHECK(count_occurrences(cc, "<complete_sentence>") == 3);

  std::string compound = parse_to_string("Please sit down, read the book and then write your paper!");
  CHECK(compound.find("<complexity>compound</complexity>") != std::string::npos);
  CHECK(count_occurrences(compound, "<simple_sentence>") == 3);
  CHECK(compound.find("<verb_word>sit down</verb_word>") != std::string::npos);

  std::string complex_o = parse_to_string("Please phone me if you have time.");
  CHECK(complex_o.find("<complexity>complex</complexity>") != std::string::npos);
}

TEST_CASE("full exclamations") {
  std::string np_form = parse_to_string("What a rainy day it is!");
  CHECK(np_form.find("<mood>full exclamation</mood>") != std::string::npos);
  CHECK(np_form.find("<predicate_type>np</predicate_type>") != std::string::npos);
  CHECK(np_form.find("<adj><grade>absolute</grade><word>rainy</word></adj>") !=
        std::string::npos);

  std::string adj_form = parse_to_string("How beautiful she is!");
  CHECK(adj_form.find("<predicate_type>adj</predicate_type>") != std::string::npos);
  CHECK(adj_form.find("<grade>predicative</grade>") != std::string::npos);

  std::string subj_form = parse_to_string("What a good book has been lost by him!");
  CHECK(subj_form.find("<voice>passive</voice>") != std::string::npos);
  CHECK(subj_form.find("<tense>perfect</tense>") != std::string::npos);

  std::string adv_form = parse_to_string("How completely the room is cleaned!");
  CHECK(adv_form.find("<voice>passive</voice>") != std::string::npos);
  CHECK(adv_form.find("<word>completely</word>") != std::string::npos);
}

TEST_CASE("terse exclamations fall out of the full-exclamation rule") {
  CHECK_THROWS_AS(parse_exclamation(tokenize("How terrible !"), demo_lexicon()), NoParseError);
  auto analyses = nlml_test::classify("How terrible !");
  REQUIRE(!analyses.results.empty());
  CHECK(analyses.results.front().document.mood() == "how terse exclamation");
}

TEST_CASE("agreement gates sentence-level parses") {
  CHECK_THROWS_AS(parse_statement(tokenize("I comes ."), demo_lexicon()), NoParseError);
  CHECK_THROWS_AS(parse_statement(tokenize("he come ."), demo_lexicon()), NoParseError);
  CHECK_THROWS_AS(parse_statement(tokenize("both you and he comes ."), demo_lexicon()),
                  NoParseError);
  CHECK_NOTHROW(parse_statement(tokenize("I come ."), demo_lexicon()));
  CHECK_NOTHROW(parse_statement(tokenize("he comes ."), demo_lexicon()));
  CHECK_NOTHROW(parse_statement(tokenize("both you and he come ."), demo_lexicon()));
}

TEST_CASE("neither-nor subjects agree with the nearer part") {
  CHECK_NOTHROW(parse_statement(tokenize("Neither he nor I come today ."), demo_lexicon()));
  CHECK_THROWS_AS(parse_statement(tokenize("Neither he nor I comes today ."), demo_lexicon()),
                  NoParseError);
  std::string s = parse_to_string("Neither the car nor the bicycle was repaired by him.");
  CHECK(s.find("<part_connector>neither_nor</part_connector>") != std::string::npos);
  CHECK(s.find("<voice>passive</voice>") != std::string::npos);
}

TEST_CASE("passive verb phrases") {
  std::string s = parse_to_string("Both the car and the bicycle are repaired by him alone.");
  CHECK(s.find("<voice>passive</voice>") != std::string::npos);
  CHECK(s.find("<kernel_tense>past participle</kernel_tense>") != std::string::npos);
  CHECK(s.find("<prep_phrase><prep>by</prep>") != std::string::npos);

  std::string modal = parse_to_string("May the car be repaired by him?");
  CHECK(modal.find("<tense>modal</tense>") != std::string::npos);
  CHECK(modal.find("<verb_word>may</verb_word><verb_word>be</verb_word><verb_word>repaired"
                   "</verb_word>") != std::string::npos);

  std::string perfect = parse_to_string("The car has been repaired, but the room has not been cleaned.");
  CHECK(perfect.find("<tense>perfect</tense>") != std::string::npos);
  CHECK(perfect.find("<verb_word>has not</verb_word><verb_word>been</verb_word>") !=
        std::string::npos);
}

TEST_CASE("promoted passives keep their residual complements") {
  std::string bitrans = parse_to_string("A book written by the famous professor is given him.");
  CHECK(bitrans.find("<indirect_object>") != std::string::npos);
  CHECK(bitrans.find("<relative_clause>") != std::string::npos);

  std::string raised = parse_to_string("The student was seen to do his job carefully.");
  CHECK(raised.find("<noun_clause>") != std::string::npos);
  CHECK(raised.find("<verb_word>to do</verb_word>") != std::string::npos);
}

TEST_CASE("noun clause as real subject is dispreferred but available") {
  TokenStream ts = tokenize("What he is now saying can't be understood by me .");
  Analyses analyses = classify_expression(ts, demo_lexicon());
  REQUIRE(!analyses.results.empty());
  const ParseResult& best = analyses.results.front();
  CHECK(best.document.mood() == "statement");
  CHECK(best.penalty == 10);
  std::string s = serialize(best.document);
  CHECK(s.find("<subject><noun_clause>") != std::string::npos);
  CHECK(s.find("<verb_word>can not</verb_word>") != std::string::npos);
}

TEST_CASE("post circumstances attach to the object clause, not the main sentence") {
  std::string s = parse_to_string("Today I know he will come tomorrow.");
  std::size_t clause = s.find("<noun_clause>");
  REQUIRE(clause != std::string::npos);
  std::size_t tomorrow = s.find("<word>tomorrow</word>");
  REQUIRE(tomorrow != std::string::npos);
  std::size_t clause_end = s.find("</noun_clause>");
  CHECK(clause < tomorrow);
  CHECK(tomorrow < clause_end);
  // "today" is a pre-circumstance of the main sentence
  CHECK(s.find("<circum><circum_type>adv</circum_type><adv><type>time</type><word>today"
               "</word></adv></circum><subject>") != std::string::npos);
}

TEST_CASE("parse_simple_sentence accepts only simple statements") {
  CHECK_NOTHROW(parse_simple_sentence(tokenize("I come ."), demo_lexicon()));
  CHECK_THROWS_AS(parse_simple_sentence(tokenize("If you come , I will go ."), demo_lexicon()),
                  NoParseError);
  CHECK_THROWS_AS(parse_simple_sentence(tokenize("I comes ."), demo_lexicon()), NoParseError);
}

TEST_CASE("multi-part verb phrases join with a connector") {
  std::string s = parse_to_string("I come and go.");
  CHECK(s.find("<verb_phrase_part>") != std::string::npos);
  CHECK(s.find("<verb_phrase_connector>and</verb_phrase_connector>") != std::string::npos);
  CHECK(s.find("<complexity>simple</complexity>") != std::string::npos);
}

TEST_CASE("mid and post circumstances split around the empty marker") {
  std::string s = parse_to_string("It snows, but I still go out.");
  // "still" precedes the empty circum marker inside its verb phrase
  CHECK(s.find("<circum><circum_type>adv</circum_type><adv><type>time</type><word>still</word>"
               "</adv></circum><circum></circum>") != std::string::npos);
  CHECK(s.find("<verb_word>go out</verb_word>") != std::string::npos);
}

TEST_CASE("result constructions carry their clause") {
  std::string s = parse_to_string("The horse runs so fast that others can not catch up with it.");
  CHECK(s.find("<word>so fast</word>") != std::string::npos);
  CHECK(s.find("<noun_clause><word>that</word>") != std::string::npos);
  CHECK(s.find("<verb_word>catch up</verb_word>") != std::string::npos);
  CHECK(s.find("<prep_phrase><prep>with</prep>") != std::string::npos);
}

TEST_CASE("whether-or-not subordinator label") {
  std::string s = parse_to_string("I will go whether you come or not.");
  CHECK(s.find("<subordinator>whether or not</subordinator>") != std::string::npos);
}
