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

TEST_CASE("punctuation splits into standalone tokens") {
  TokenStream ts = tokenize("If it rains today, you will not go, and I will not come.");
  REQUIRE(ts.size() == 15);
  CHECK(ts[0].text == "if");
  CHECK(ts[4].text == ",");
  CHECK(ts[14].text == ".");
  CHECK(ts[4].is_punct());
  CHECK_FALSE(ts[0].is_punct());
}

TEST_CASE("case folding keeps the original spelling in spans") {
  TokenStream ts = tokenize("I Come");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].text == "i");
  CHECK(ts[0].original == "I");
  CHECK(ts[1].text == "come");
  CHECK(ts[1].original == "Come");
  CHECK(ts[0].begin == 0);
  CHECK(ts[0].end == 1);
  CHECK(ts[1].begin == 2);
  CHECK(ts[1].end == 6);
}

TEST_CASE("contractions stay whole") {
  TokenStream ts = tokenize("I don't understand");
  REQUIRE(ts.size() == 3);
  CHECK(ts[1].text == "don't");
}

TEST_CASE("tag delimiters are rejected") {
  CHECK_THROWS_AS(tokenize("a <mood> b"), TokenizeError);
  CHECK_THROWS_AS(tokenize("x>y"), TokenizeError);
}

TEST_CASE("empty and whitespace-only input produce an empty stream") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t \n ").empty());
}

// Concatenating tokens with single spaces and removing space before
// punctuation reproduces the normalized input.
TEST_CASE("normalization invariant over the corpus") {
  for (const nlml_test::CorpusRow& row : nlml_test::load_corpus()) {
    TokenStream ts = tokenize(row.text);
    std::string normalized = ts.normalized();

    std::string expected;
    {
      // fold case, split on spaces, strip space before punctuation
      std::string folded;
      for (char c : row.text) folded += char(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
      bool in_space = false;
      for (char c : folded) {
        bool sp = c == ' ' || c == '\t' || c == '\n';
        if (sp) {
          in_space = true;
          continue;
        }
        bool punct = c == '.' || c == '?' || c == '!' || c == ',';
        if (in_space && !expected.empty() && !punct) expected += ' ';
        in_space = false;
        expected += c;
      }
    }
    INFO(row.text);
    CHECK(normalized == expected);
  }
}
