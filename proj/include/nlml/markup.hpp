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
// NLML is a nested-tag markup for English syntax: no attributes, no
// self-closing forms, no escaping, and documents are a sibling sequence of
// elements rather than a single root. This header defines the tree, the
// closed tag vocabulary, and the canonical string form.

#ifndef NLML_MARKUP_HPP
#define NLML_MARKUP_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlml {

inline constexpr std::array<std::string_view, 37> kTagVocabulary = {
    "mood",           "complexity",      "voice",
    "subordinator",   "sub",             "complete_sentence",
    "simple_sentence", "sentence_connector", "subject",
    "verb_phrase",    "verb_phrase_part", "verb_phrase_connector",
    "verb_type",      "tense",           "numb",
    "pers",           "case",            "verb_word",
    "kernel_tense",   "circum",          "circum_type",
    "noun",           "type",            "word",
    "adv",            "adj",             "grade",
    "predicate",      "predicate_type",  "direct_object",
    "indirect_object", "prep_phrase",    "prep",
    "part",           "part_connector",  "relative_clause",
    "noun_clause",
};

inline bool is_known_tag(std::string_view tag) {
  return std::find(kTagVocabulary.begin(), kTagVocabulary.end(), tag) != kTagVocabulary.end();
}

inline constexpr std::array<std::string_view, 11> kMoodStrings = {
    "statement",  "question", "order",
    "full exclamation", "np", "adj",
    "about", "circumstances", "what terse exclamation",
    "how terse exclamation", "subcircum",
};

inline constexpr std::array<std::string_view, 4> kComplexityStrings = {
    "simple", "complex", "compound", "compound complex"};

// A tree node: either an element with ordered children, or a text leaf.
// Text never contains '<' or '>'.
struct Node {
  std::string tag;           // empty for text nodes
  std::string text;          // used when tag is empty
  std::vector<Node> children;

  bool is_text() const { return tag.empty(); }

  static Node elem(std::string t) { return Node{std::move(t), {}, {}}; }
  static Node elem(std::string t, std::vector<Node> kids) {
    return Node{std::move(t), {}, std::move(kids)};
  }
  static Node leaf(std::string t, std::string content) {
    Node n{std::move(t), {}, {}};
    n.children.push_back(Node{{}, std::move(content), {}});
    return n;
  }
  static Node txt(std::string content) { return Node{{}, std::move(content), {}}; }

  bool operator==(const Node&) const = default;

  // Text of this element's direct text children, in order.
  std::string inner_text() const {
    std::string out;
    for (const Node& c : children)
      if (c.is_text()) {
        if (!out.empty()) out += ' ';
        out += c.text;
      }
    return out;
  }

  const Node* find(std::string_view t) const {
    for (const Node& c : children)
      if (c.tag == t) return &c;
    return nullptr;
  }
};

// A document is an ordered sibling sequence of elements; sentence and
// phrase documents alike begin with a <mood> element.
struct Document {
  std::vector<Node> roots;

  bool operator==(const Document&) const = default;

  const Node* find(std::string_view tag) const {
    for (const Node& n : roots)
      if (n.tag == tag) return &n;
    return nullptr;
  }
  std::string mood() const {
    const Node* m = find("mood");
    return m ? m->inner_text() : std::string();
  }
};

class MarkupError : public std::runtime_error {
 public:
  MarkupError(std::string kind, std::size_t position, std::string detail)
      : std::runtime_error(kind + " at offset " + std::to_string(position) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(std::move(kind)),
        position_(position) {}
  const std::string& kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  std::string kind_;
  std::size_t position_;
};

class InvalidTag : public std::runtime_error {
 public:
  explicit InvalidTag(const std::string& tag)
      : std::runtime_error("invalid NLML tag: " + tag), tag_(tag) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

namespace detail {

inline std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool in_space = false;
  for (char c : s) {
    bool sp = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (sp) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

inline void serialize_node(const Node& n, std::string& out) {
  if (n.is_text()) {
    out += collapse_spaces(n.text);
    return;
  }
  if (!is_known_tag(n.tag)) throw InvalidTag(n.tag);
  out += '<';
  out += n.tag;
  out += '>';
  bool prev_text = false;
  for (const Node& c : n.children) {
    // adjacent text runs stay word-separated
    if (c.is_text() && prev_text && !collapse_spaces(c.text).empty()) out += ' ';
    serialize_node(c, out);
    prev_text = c.is_text() && !collapse_spaces(c.text).empty();
  }
  out += "</";
  out += n.tag;
  out += '>';
}

}  // namespace detail

// Canonical string form: tags and trimmed text only, no inter-element
// whitespace; empty elements serialize as <tag></tag>.
inline std::string serialize(const Document& doc) {
  std::string out;
  for (const Node& n : doc.roots) {
    if (n.is_text()) throw InvalidTag("(text at top level)");
    detail::serialize_node(n, out);
  }
  return out;
}

inline std::string serialize(const Node& n) {
  std::string out;
  detail::serialize_node(n, out);
  return out;
}

// Parses a canonical or near-canonical NLML string. Whitespace around and
// inside text is tolerated; unknown tags, mismatched close tags, and text
// outside any element are rejected.
inline Document deserialize(std::string_view s) {
  Document doc;
  std::vector<Node*> stack;
  std::size_t i = 0;
  auto flush_text = [&](std::size_t start, std::size_t end) {
    std::string t = detail::collapse_spaces(s.substr(start, end - start));
    if (t.empty()) return;
    if (stack.empty()) throw MarkupError("StrayText", start, t);
    stack.back()->children.push_back(Node::txt(std::move(t)));
  };
  std::size_t text_start = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      if (s[i] == '>') throw MarkupError("StrayText", i, ">");
      ++i;
      continue;
    }
    flush_text(text_start, i);
    std::size_t close = s.find('>', i);
    if (close == std::string_view::npos) throw MarkupError("UnbalancedTag", i, "unterminated tag");
    std::string_view body = s.substr(i + 1, close - i - 1);
    bool closing = !body.empty() && body.front() == '/';
    std::string_view name = closing ? body.substr(1) : body;
    if (name.empty() || name.find('<') != std::string_view::npos)
      throw MarkupError("UnknownTag", i, std::string(body));
    if (!is_known_tag(name)) throw MarkupError("UnknownTag", i, std::string(name));
    if (closing) {
      if (stack.empty() || stack.back()->tag != name)
        throw MarkupError("UnbalancedTag", i, std::string(name));
      stack.pop_back();
    } else {
      Node n = Node::elem(std::string(name));
      if (stack.empty()) {
        doc.roots.push_back(std::move(n));
        stack.push_back(&doc.roots.back());
      } else {
        stack.back()->children.push_back(std::move(n));
        stack.push_back(&stack.back()->children.back());
      }
    }
    i = close + 1;
    text_start = i;
  }
  flush_text(text_start, s.size());
  if (!stack.empty()) throw MarkupError("UnbalancedTag", s.size(), stack.back()->tag);
  return doc;
}

namespace detail {

inline void canonicalize_node(Node& n) {
  if (n.is_text()) {
    n.text = collapse_spaces(n.text);
    return;
  }
  for (Node& c : n.children) canonicalize_node(c);
  std::erase_if(n.children, [](const Node& c) { return c.is_text() && c.text.empty(); });
  // adjacent text runs merge into one, word-separated
  for (std::size_t i = 1; i < n.children.size();) {
    if (n.children[i].is_text() && n.children[i - 1].is_text()) {
      n.children[i - 1].text += ' ' + n.children[i].text;
      n.children.erase(n.children.begin() + long(i));
    } else
      ++i;
  }
  // Repair the generator's "secnd" spelling for the person value.
  if (n.tag == "pers")
    for (Node& c : n.children)
      if (c.is_text() && c.text == "secnd") c.text = "second";
}

}  // namespace detail

// Idempotent normalization: trims and collapses text, drops empty text
// nodes, and repairs the "secnd" person value. Element order is preserved;
// order is meaningful in NLML.
inline Document canonicalize(Document doc) {
  for (Node& n : doc.roots) detail::canonicalize_node(n);
  return doc;
}

struct Violation {
  std::string where;
  std::string message;
  bool operator==(const Violation&) const = default;
};

namespace detail {

inline bool in_list(std::string_view v, std::initializer_list<std::string_view> vals) {
  return std::find(vals.begin(), vals.end(), v) != vals.end();
}

// numb/pers/case values may be unresolved sets serialized with '|'.
inline bool valid_set_text(std::string_view v, std::initializer_list<std::string_view> atoms) {
  std::size_t start = 0;
  if (v.empty()) return false;
  while (true) {
    std::size_t bar = v.find('|', start);
    std::string_view piece = v.substr(start, bar == std::string_view::npos ? bar : bar - start);
    if (!in_list(piece, atoms)) return false;
    if (bar == std::string_view::npos) return true;
    start = bar + 1;
  }
}

inline void validate_node(const Node& n, const std::string& path, std::vector<Violation>& out) {
  if (n.is_text()) return;
  std::string here = path.empty() ? n.tag : path + "/" + n.tag;
  if (!is_known_tag(n.tag)) {
    out.push_back({here, "unknown tag"});
    return;
  }
  const std::string text = n.inner_text();
  if (n.tag == "mood" && !in_list(text, {kMoodStrings[0], kMoodStrings[1], kMoodStrings[2],
                                         kMoodStrings[3], kMoodStrings[4], kMoodStrings[5],
                                         kMoodStrings[6], kMoodStrings[7], kMoodStrings[8],
                                         kMoodStrings[9], kMoodStrings[10]}))
    out.push_back({here, "invalid mood value: " + text});
  if (n.tag == "complexity" &&
      !in_list(text, {"simple", "complex", "compound", "compound complex"}))
    out.push_back({here, "invalid complexity value: " + text});
  if (n.tag == "voice" && text != "passive")
    out.push_back({here, "voice tag must read 'passive'; active omits it"});
  if (n.tag == "tense" &&
      !in_list(text, {"present", "past", "present progressive", "past progressive", "perfect",
                      "modal", "infi", "past participle", "present participle"}))
    out.push_back({here, "invalid tense value: " + text});
  if (n.tag == "kernel_tense" &&
      !in_list(text, {"infi", "past participle", "present participle"}))
    out.push_back({here, "invalid kernel_tense value: " + text});
  if (n.tag == "numb" && !valid_set_text(text, {"sing", "plur"}))
    out.push_back({here, "invalid numb value: " + text});
  if (n.tag == "pers" && !valid_set_text(text, {"first", "second", "third"}))
    out.push_back({here, "invalid pers value: " + text});
  if (n.tag == "case" && !valid_set_text(text, {"nom", "dat"}))
    out.push_back({here, "invalid case value: " + text});
  if (n.tag == "grade" &&
      !in_list(text, {"absolute", "comparative", "superlative", "predicative"}))
    out.push_back({here, "invalid grade value: " + text});
  if (n.tag == "predicate_type" && !in_list(text, {"np", "adj", "prep", "clause"}))
    out.push_back({here, "invalid predicate_type value: " + text});
  for (const Node& c : n.children) validate_node(c, here, out);
}

}  // namespace detail

// Structural checks beyond well-formedness; violations are data, not errors.
inline std::vector<Violation> validate(const Document& doc) {
  std::vector<Violation> out;
  if (doc.roots.empty() || doc.roots.front().tag != "mood")
    out.push_back({"", "document must begin with a mood element"});
  for (const Node& n : doc.roots) detail::validate_node(n, "", out);
  return out;
}

namespace detail {

inline void render_tree_node(const Node& n, int depth, std::string& out) {
  out.append(std::size_t(depth) * 2, ' ');
  if (n.is_text()) {
    out += '"';
    out += n.text;
    out += "\"\n";
    return;
  }
  out += n.tag;
  out += '\n';
  for (const Node& c : n.children) render_tree_node(c, depth + 1, out);
}

}  // namespace detail

// Indented debugging view, one tag or quoted text per line.
inline std::string render_tree(const Document& doc) {
  std::string out;
  for (const Node& n : doc.roots) detail::render_tree_node(n, 0, out);
  return out;
}

}  // namespace nlml

#endif  // NLML_MARKUP_HPP
