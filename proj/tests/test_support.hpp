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

#ifndef NLML_TESTS_TEST_SUPPORT_HPP
#define NLML_TESTS_TEST_SUPPORT_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlml/nlml.hpp"

namespace nlml_test {

inline std::string source_dir() { return NLML_SOURCE_DIR; }

inline std::string fixture_path(const std::string& name) {
  return source_dir() + "/tests/fixtures/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string read_fixture(const std::string& name) {
  return read_file(fixture_path(name));
}

inline const nlml::Lexicon& demo_lexicon() {
  static const nlml::Lexicon lex = nlml::load_lexicon(source_dir() + "/lexicon/en-demo.lex");
  return lex;
}

inline nlml::Document parse_best(const std::string& text) {
  nlml::TokenStream tokens = nlml::tokenize(text);
  nlml::Analyses analyses = nlml::classify_expression(tokens, demo_lexicon());
  if (analyses.results.empty())
    throw std::runtime_error("no parse for: " + text + " (furthest " +
                             std::to_string(analyses.furthest) + ")");
  return analyses.results.front().document;
}

inline nlml::Analyses classify(const std::string& text) {
  return nlml::classify_expression(nlml::tokenize(text), demo_lexicon());
}

inline bool parses(const std::string& text) {
  return !classify(text).results.empty();
}

struct CorpusRow {
  std::string text;
  std::string mood;
  std::string complexity;  // "-" for phrase-level
  std::string voice;
};

// Grammar-directed random document generator; every output passes
// validate() and its text never contains tag delimiters.
class DocGen {
 public:
  explicit DocGen(uint32_t seed) : rng_(seed) {}

  nlml::Document next() {
    nlml::Document doc;
    doc.roots.push_back(nlml::Node::leaf("mood", pick(kMoods)));
    doc.roots.push_back(nlml::Node::leaf("complexity", pick(kComplexities)));
    int extra = int(rng_() % 4);
    for (int i = 0; i < extra; ++i) doc.roots.push_back(random_element(2));
    return doc;
  }

 private:
  static constexpr std::array<const char*, 11> kMoods = {
      "statement", "question", "order", "full exclamation", "np", "adj", "about",
      "circumstances", "what terse exclamation", "how terse exclamation", "subcircum"};
  static constexpr std::array<const char*, 4> kComplexities = {"simple", "complex", "compound",
                                                               "compound complex"};
  static constexpr std::array<const char*, 9> kTenses = {
      "present", "past", "present progressive", "past progressive", "perfect",
      "modal", "infi", "past participle", "present participle"};
  static constexpr std::array<const char*, 8> kWords = {"book", "come",  "rainy", "desk",
                                                        "will", "there", "today", "I"};

  template <std::size_t N>
  std::string pick(const std::array<const char*, N>& pool) {
    return pool[rng_() % N];
  }

  std::string random_word() {
    std::string w = pick(kWords);
    if (rng_() % 4 == 0) w += " " + std::string(pick(kWords));
    return w;
  }

  nlml::Node random_element(int depth) {
    using nlml::Node;
    switch (rng_() % (depth > 0 ? 7 : 4)) {
      case 0: return Node::leaf("word", random_word());
      case 1: return Node::leaf("tense", pick(kTenses));
      case 2: return Node::leaf("verb_word", random_word());
      case 3: {
        uint32_t bits = 1 + rng_() % 3;
        std::string numb = bits == 1 ? "sing" : bits == 2 ? "plur" : "sing|plur";
        return Node::leaf("numb", numb);
      }
      case 4: {
        Node n = Node::elem("subject");
        int kids = int(rng_() % 3);
        for (int i = 0; i < kids; ++i) n.children.push_back(random_element(depth - 1));
        return n;
      }
      case 5: {
        Node n = Node::elem("circum");
        if (rng_() % 2) n.children.push_back(random_element(depth - 1));
        return n;
      }
      default: {
        Node n = Node::elem("noun");
        n.children.push_back(Node::leaf("type", "noun"));
        n.children.push_back(Node::leaf("word", random_word()));
        if (rng_() % 2) n.children.push_back(random_element(depth - 1));
        return n;
      }
    }
  }

  std::mt19937 rng_;
};

inline std::vector<CorpusRow> load_corpus() {
  std::vector<CorpusRow> rows;
  std::istringstream in(read_fixture("corpus.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw std::runtime_error("bad corpus row: " + line);
    rows.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return rows;
}

}  // namespace nlml_test

#endif  // NLML_TESTS_TEST_SUPPORT_HPP
