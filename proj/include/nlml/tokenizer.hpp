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

#ifndef NLML_TOKENIZER_HPP
#define NLML_TOKENIZER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlml/lexicon.hpp"

namespace nlml {

struct Token {
  std::string text;        // case-folded
  std::string original;    // as written in the input
  std::size_t begin = 0;   // byte offset into the input
  std::size_t end = 0;

  bool is_punct() const {
    return text.size() == 1 &&
           (text[0] == '.' || text[0] == '?' || text[0] == '!' || text[0] == ',');
  }
};

class TokenizeError : public std::runtime_error {
 public:
  TokenizeError(std::string reason, std::size_t position)
      : std::runtime_error(reason + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Ordered tokens with original spans. Sentence punctuation . ? ! , is
// split into standalone tokens; contractions stay whole and are resolved
// by the lexicon. Tag delimiters are rejected, since NLML text admits no
// escaping.
class TokenStream {
 public:
  TokenStream() = default;
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  const std::vector<Token>& tokens() const { return tokens_; }

  // Token texts joined by single spaces, then space-before-punctuation
  // removed; reproduces the normalized input.
  std::string normalized() const {
    std::string out;
    for (const Token& t : tokens_) {
      if (!out.empty() && !t.is_punct()) out += ' ';
      if (!out.empty() && t.is_punct() && t.text == ",") {
        // no space before a comma either
      }
      out += t.text;
    }
    return out;
  }

 private:
  std::vector<Token> tokens_;
};

inline TokenStream tokenize(std::string_view input) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  auto is_sep_punct = [](char c) { return c == '.' || c == '?' || c == '!' || c == ','; };
  while (i < input.size()) {
    if (is_space(input[i])) {
      ++i;
      continue;
    }
    if (input[i] == '<' || input[i] == '>')
      throw TokenizeError("input text may not contain '<' or '>'", i);
    if (is_sep_punct(input[i])) {
      tokens.push_back(Token{std::string(1, input[i]), std::string(1, input[i]), i, i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < input.size() && !is_space(input[i]) && !is_sep_punct(input[i])) {
      if (input[i] == '<' || input[i] == '>')
        throw TokenizeError("input text may not contain '<' or '>'", i);
      ++i;
    }
    std::string original(input.substr(start, i - start));
    tokens.push_back(Token{fold(original), original, start, i});
  }
  return TokenStream(std::move(tokens));
}

}  // namespace nlml

#endif  // NLML_TOKENIZER_HPP
